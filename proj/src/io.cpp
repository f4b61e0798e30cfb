#include "latkern/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace latkern {

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_complex(Complex v) {
    if (v.imag() == 0.0)
        return format_double(v.real());
    std::string s = format_double(v.real());
    s += v.imag() < 0.0 ? "-" : "+";
    s += format_double(std::abs(v.imag()));
    s += "i";
    return s;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw std::runtime_error("failed writing: " + path);
}

std::string kernel_csv(const JointKernelFT& kernel) {
    std::ostringstream os;
    os << "x,x_prime,p,re,im\n";
    const Eigen::Index n = kernel.grid.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < kernel.slices.size(); ++k) {
                const Complex v = kernel.slices[k].values(i, j);
                os << format_double(kernel.grid.point(i)) << ','
                   << format_double(kernel.grid.point(j)) << ','
                   << format_complex(kernel.freqs.value(k)) << ',' << format_double(v.real())
                   << ',' << format_double(v.imag()) << '\n';
            }
        }
    }
    return os.str();
}

std::string density_csv(const JointDensity& density) {
    std::ostringstream os;
    os << "x,x_prime,dy,re,im\n";
    const Eigen::Index n = density.grid.size();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (std::size_t k = 0; k < density.offsets.size(); ++k)
                os << format_double(density.grid.point(i)) << ','
                   << format_double(density.grid.point(j)) << ','
                   << format_double(density.offsets[k]) << ','
                   << format_double(density.values[k](i, j)) << ",0\n";
    return os.str();
}

std::string sup_kernel_csv(const SupJointKernel& kernel) {
    std::ostringstream os;
    os << "x_prime,y_prime,value\n";
    const Eigen::Index n = kernel.grid.size();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            os << format_double(kernel.grid.point(i)) << ','
               << format_double(kernel.grid.point(j)) << ','
               << format_double(kernel.u(i, j)) << '\n';
    return os.str();
}

std::string convergence_csv(const ConvergenceReport& report) {
    std::ostringstream os;
    os << "log_h,log_gap\n";
    for (std::size_t i = 0; i < report.gaps.size(); ++i)
        os << format_double(std::log(report.coarse_steps[i])) << ','
           << format_double(std::log(report.gaps[i])) << '\n';
    return os.str();
}

std::string path_table_csv(const PathEnumeration& paths) {
    std::ostringstream os;
    os << "x_prime,y,weight_re,weight_im\n";
    for (const auto& [key, weight] : paths.merged())
        os << format_double(paths.grid.point(key.first)) << ','
           << format_double(static_cast<double>(key.second) * 1e-12) << ','
           << format_double(weight) << ",0\n";
    return os.str();
}

RealMatrix read_psi_csv(const std::string& path, const SpatialGrid& grid) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open psi table: " + path);
    const Eigen::Index n = grid.size();
    RealMatrix psi(n, n);
    RealMatrix seen = RealMatrix::Zero(n, n);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        if (line_no == 1 && line.find("x1") != std::string::npos)
            continue; // header
        std::istringstream ls(line);
        std::string f1, f2, f3;
        if (!std::getline(ls, f1, ',') || !std::getline(ls, f2, ',') || !std::getline(ls, f3))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected x1,x2,value");
        const Eigen::Index i = grid.index_of(std::stod(f1));
        const Eigen::Index j = grid.index_of(std::stod(f2));
        psi(i, j) = std::stod(f3);
        seen(i, j) = 1.0;
    }
    if (seen.minCoeff() < 1.0)
        throw std::runtime_error(path + ": psi table does not cover every grid pair");
    return psi;
}

nlohmann::ordered_json convergence_report_json(const ConvergenceReport& report) {
    nlohmann::ordered_json j;
    j["levels"] = report.levels;
    j["coarse_steps"] = report.coarse_steps;
    j["gaps"] = report.gaps;
    j["fitted_rate"] = report.fitted_rate;
    j["fit_residual"] = report.fit_residual;
    j["t"] = report.t;
    j["disc_radius"] = report.disc_radius;
    j["z_count"] = report.z_count;
    j["coefficients"] = report.coefficients;
    j["method"] = report.method;
    return j;
}

} // namespace latkern
