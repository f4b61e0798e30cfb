#include "latkern/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "latkern/abelian_ext.hpp"
#include "latkern/analysis.hpp"
#include "latkern/generators.hpp"
#include "latkern/io.hpp"
#include "latkern/version.hpp"

namespace latkern {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': cannot parse number from '" + text + "'");
    }
}

} // namespace

const std::string& ParsedConfig::get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end())
        throw ConfigError("missing required field '" + key + "'");
    return it->second;
}

std::string ParsedConfig::get_or(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double ParsedConfig::get_double(const std::string& key) const {
    return to_double(key, get(key));
}

double ParsedConfig::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long ParsedConfig::get_int(const std::string& key) const {
    const double v = get_double(key);
    const auto i = static_cast<long long>(std::llround(v));
    if (static_cast<double>(i) != v)
        throw ConfigError("field '" + key + "': expected an integer, got '" + get(key) + "'");
    return i;
}

long long ParsedConfig::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

ParsedConfig parse_config_text(const std::string& text, const std::string& origin) {
    ParsedConfig out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (out.values.count(full))
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                              full + "'");
        out.values[full] = value;
        out.lines[full] = line_no;
    }
    return out;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

Complex parse_complex(const std::string& text) {
    std::string s = trim(text);
    if (s.empty())
        throw ConfigError("empty complex literal");
    if (s.back() != 'i' && s.back() != 'I')
        return {to_double("frequency", s), 0.0};
    s.pop_back(); // now "<re><+-><im>" or "<im>" or sign-only "<+->"
    // locate the sign splitting re and im (skip a leading sign and exponents)
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos)
        return {0.0, s.empty() || s == "+" ? 1.0 : (s == "-" ? -1.0 : to_double("frequency", s))};
    const std::string re = s.substr(0, split);
    std::string im = s.substr(split);
    if (im == "+")
        im = "1";
    else if (im == "-")
        im = "-1";
    return {to_double("frequency", re), to_double("frequency", im)};
}

namespace {

ScalarRecipe parse_scalar_recipe(const std::string& key, const std::string& text) {
    const auto toks = split_ws(text);
    if (toks.empty())
        throw ConfigError("field '" + key + "': empty coefficient recipe");
    const std::string& kind = toks[0];
    const auto need = [&](std::size_t n) {
        if (toks.size() != n + 1)
            throw ConfigError("field '" + key + "': '" + kind + "' takes " + std::to_string(n) +
                              " parameters");
    };
    if (kind == "constant") {
        need(1);
        return ScalarRecipe::make_constant(to_double(key, toks[1]));
    }
    if (kind == "affine_clipped") {
        need(4);
        return ScalarRecipe::affine_clipped(to_double(key, toks[1]), to_double(key, toks[2]),
                                            to_double(key, toks[3]), to_double(key, toks[4]));
    }
    if (kind == "sinusoid") {
        need(4);
        return ScalarRecipe::sinusoid(to_double(key, toks[1]), to_double(key, toks[2]),
                                      to_double(key, toks[3]), to_double(key, toks[4]));
    }
    if (kind == "tabulated") {
        if (toks.size() < 3)
            throw ConfigError("field '" + key + "': tabulated needs a level and samples");
        const int level = static_cast<int>(to_double(key, toks[1]));
        std::vector<double> samples;
        for (std::size_t i = 2; i < toks.size(); ++i)
            samples.push_back(to_double(key, toks[i]));
        try {
            return ScalarRecipe::tabulated(level, std::move(samples));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("field '" + key + "': " + e.what());
        }
    }
    throw ConfigError("field '" + key + "': unknown coefficient family '" + kind + "'");
}

CoefficientRecipe parse_recipe(const ParsedConfig& cfg) {
    if (cfg.has("coefficients.family")) {
        const std::string family = cfg.get("coefficients.family");
        if (family == "smooth")
            return smooth_family();
        if (family == "smooth_dx_only")
            return smooth_family_dx_only();
        throw ConfigError("field 'coefficients.family': unknown preset '" + family + "'");
    }
    CoefficientRecipe r;
    r.sigma2 = parse_scalar_recipe("coefficients.sigma2", cfg.get("coefficients.sigma2"));
    if (cfg.has("coefficients.mu"))
        r.mu = parse_scalar_recipe("coefficients.mu", cfg.get("coefficients.mu"));
    if (cfg.has("coefficients.a"))
        r.a = parse_scalar_recipe("coefficients.a", cfg.get("coefficients.a"));
    if (cfg.has("coefficients.b"))
        r.b = parse_scalar_recipe("coefficients.b", cfg.get("coefficients.b"));
    return r;
}

FrequencyGrid parse_frequencies(const ParsedConfig& cfg) {
    if (cfg.has("frequencies.list")) {
        std::vector<Complex> zs;
        for (const auto& tok : split_ws(cfg.get("frequencies.list")))
            zs.push_back(parse_complex(tok));
        return FrequencyGrid::explicit_list(std::move(zs));
    }
    if (cfg.has("frequencies.window")) {
        const double edge = cfg.get_double("frequencies.window");
        const auto count = static_cast<std::size_t>(cfg.get_int_or("frequencies.count", 129));
        try {
            return FrequencyGrid::uniform_window(edge, count);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("frequencies: ") + e.what());
        }
    }
    if (cfg.has("frequencies.level")) {
        const auto n = static_cast<int>(cfg.get_int("frequencies.level"));
        const double L = cfg.get_double("frequencies.half_width");
        return FrequencyGrid::inverse_lattice(n, L);
    }
    throw ConfigError("section [frequencies]: need 'list', 'window' or 'level'");
}

KernelMethod parse_method(const ParsedConfig& cfg) {
    const std::string kind = cfg.get_or("method.kind", "exact");
    if (kind == "exact")
        return KernelMethod::exact();
    if (kind == "euler") {
        KernelMethod m = KernelMethod::euler_auto(cfg.get_double_or("method.safety", 0.9));
        m.dt = cfg.get_double_or("method.dt", 0.0);
        return m;
    }
    throw ConfigError("field 'method.kind': expected exact or euler, got '" + kind + "'");
}

} // namespace

RunConfig build_run_config(const ParsedConfig& parsed) {
    RunConfig c;
    c.raw = parsed;
    c.job = parsed.get("run.job");
    const bool is_validate = c.job == "validate";
    if (c.job != "kernel" && c.job != "sup" && c.job != "dsum" && c.job != "convergence" &&
        !is_validate)
        throw ConfigError("field 'run.job': unknown job '" + c.job + "'");
    c.output_dir = parsed.get_or("run.output", "latkern_out");

    for (const auto& [key, value] : parsed.values)
        if (key.rfind("tolerances.", 0) == 0)
            c.tolerances[key.substr(11)] = to_double(key, value);

    if (is_validate)
        return c;

    c.half_width = parsed.get_double("grid.half_width");
    if (!(c.half_width > 0.0))
        throw ConfigError("field 'grid.half_width': must be positive");

    if (c.job == "convergence") {
        if (!parsed.has("grid.levels"))
            throw ConfigError("missing required field 'grid.levels'");
        for (const auto& tok : split_ws(parsed.get("grid.levels")))
            c.levels.push_back(static_cast<int>(to_double("grid.levels", tok)));
        if (c.levels.empty())
            throw ConfigError("field 'grid.levels': empty level list");
        for (std::size_t i = 1; i < c.levels.size(); ++i)
            if (c.levels[i] <= c.levels[i - 1])
                throw ConfigError("field 'grid.levels': levels must be strictly increasing");
    } else {
        c.levels.push_back(static_cast<int>(parsed.get_int("grid.level")));
    }
    for (const int m : c.levels)
        if (m < 0)
            throw ConfigError("field 'grid.level(s)': refinement levels must be >= 0");

    c.recipe = parse_recipe(parsed);
    c.method = parse_method(parsed);

    if (c.job == "kernel" || c.job == "convergence") {
        c.t = parsed.get_double("time.t");
        if (c.t < 0.0)
            throw ConfigError("field 'time.t': horizon must be >= 0");
    }

    if (c.job == "kernel" || c.job == "dsum") {
        c.freqs = parse_frequencies(parsed);
        c.have_freqs = true;
    }

    if (c.job == "kernel" && parsed.has("density.offsets")) {
        c.want_density = true;
        const std::string spec = parsed.get("density.offsets");
        if (spec == "dual") {
            c.density_dual_offsets = true;
        } else {
            c.density_dual_offsets = false;
            for (const auto& tok : split_ws(spec))
                c.density_offsets.push_back(to_double("density.offsets", tok));
            if (c.density_offsets.empty())
                throw ConfigError("field 'density.offsets': empty offset list");
        }
    }

    if (c.job == "sup") {
        c.t = parsed.get_double("time.t");
        if (c.t < 0.0)
            throw ConfigError("field 'time.t': horizon must be >= 0");
        c.sup_x0 = parsed.get_double_or("sup.x0", 0.0);
    }

    if (c.job == "dsum") {
        c.dsum_period = parsed.get_double("dsum.period");
        if (!(c.dsum_period > 0.0))
            throw ConfigError("field 'dsum.period': must be positive");
        c.dsum_periods = parsed.get_int("dsum.periods");
        if (c.dsum_periods < 1)
            throw ConfigError("field 'dsum.periods': need at least one period");
        c.psi_kind = parsed.get_or("dsum.psi", "displacement");
        if (c.psi_kind == "table") {
            c.psi_path = parsed.get("dsum.psi_table");
            if (!std::filesystem::exists(c.psi_path))
                throw ConfigError("field 'dsum.psi_table': file does not exist: " + c.psi_path);
        } else if (c.psi_kind != "displacement" && c.psi_kind != "arrival") {
            throw ConfigError("field 'dsum.psi': expected displacement, arrival or table");
        }
    }

    if (c.job == "convergence") {
        c.convergence_kind = parsed.get_or("convergence.kind", "kernel");
        if (c.convergence_kind != "kernel" && c.convergence_kind != "euler_gap")
            throw ConfigError("field 'convergence.kind': expected kernel or euler_gap");
        c.disc_radius = parsed.get_double_or("convergence.disc_radius", 2.0);
        if (!(c.disc_radius > 0.0))
            throw ConfigError("field 'convergence.disc_radius': must be positive");
    }
    return c;
}

namespace {

void guard_refinement(const RunConfig& c, int level) {
    const int cap = std::max(level, 20);
    const int m0 = min_refinement_level(c.recipe, c.half_width, cap);
    if (level < m0) {
        std::ostringstream os;
        os << "refinement level m = " << level << " is below the required threshold m0 = " << m0
           << " for these coefficients";
        throw GuardError(os.str());
    }
}

nlohmann::ordered_json manifest_header(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["job"] = c.job;
    nlohmann::ordered_json echo;
    for (const auto& [key, value] : c.raw.values)
        echo[key] = value;
    j["config"] = echo;
    return j;
}

void write_artifacts(const RunConfig& c,
                     const std::vector<std::pair<std::string, std::string>>& files) {
    std::filesystem::create_directories(c.output_dir);
    for (const auto& [name, content] : files)
        write_text_file((std::filesystem::path(c.output_dir) / name).string(), content);
}

int run_kernel_job(const RunConfig& c) {
    const int level = c.levels.front();
    guard_refinement(c, level);
    const SpatialGrid grid(level, c.half_width);
    const CoefficientField coeffs = CoefficientField::sample(c.recipe, grid);
    const JointKernelFT kernel = joint_kernel(grid, coeffs, c.t, c.freqs, c.method);

    std::vector<ComplexMatrix> family;
    family.reserve(kernel.slices.size());
    for (const auto& s : kernel.slices)
        family.push_back(s.values);
    const GraphNormReport norm = graph_norm(family, diffusion_generator(grid, coeffs));

    auto manifest = manifest_header(c);
    manifest["grid"] = {{"level", level},
                        {"half_width", c.half_width},
                        {"step", grid.step()},
                        {"points", grid.size()}};
    manifest["coefficients"] = describe_recipe(c.recipe);
    manifest["t"] = c.t;
    manifest["frequencies"] = kernel.freqs.size();
    if (c.method.kind == KernelMethod::Kind::Euler) {
        manifest["method"] = "euler";
        manifest["dt"] = kernel.slices.front().method.dt;
        manifest["steps"] = kernel.slices.front().method.steps;
    } else {
        manifest["method"] = "exact";
    }
    manifest["norms"] = {{"uniform", norm.uniform},
                         {"gen_term", norm.gen_term},
                         {"adj_term", norm.adj_term},
                         {"graph", norm.total}};
    manifest["hermitian_defect"] = kernel.hermitian_defect;

    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("kernel.csv", kernel_csv(kernel));
    if (c.want_density) {
        const std::vector<double> offsets =
            c.density_dual_offsets ? dual_offsets(kernel.freqs) : c.density_offsets;
        const JointDensity density = reconstruct_joint_density(kernel, offsets);
        manifest["density"] = {{"offsets", offsets.size()},
                               {"max_imag_residual", density.max_imag_residual},
                               {"offset_weight", density.offset_weight}};
        files.emplace_back("density.csv", density_csv(density));
    }
    files.emplace_back("manifest.json", manifest.dump(2) + "\n");
    write_artifacts(c, files);
    return 0;
}

int run_sup_job(const RunConfig& c) {
    const int level = c.levels.front();
    guard_refinement(c, level);
    const SpatialGrid grid(level, c.half_width);
    const CoefficientField coeffs = CoefficientField::sample(c.recipe, grid);
    const Eigen::Index x0 = grid.index_of(c.sup_x0);
    const SupJointKernel kernel = sup_joint_kernel(grid, coeffs, c.t, x0);

    auto manifest = manifest_header(c);
    manifest["grid"] = {{"level", level}, {"half_width", c.half_width}, {"step", grid.step()}};
    manifest["coefficients"] = describe_recipe(c.recipe);
    manifest["t"] = c.t;
    manifest["x0"] = grid.point(x0);
    manifest["marginal_defect"] = kernel.marginal_defect;
    manifest["total_mass"] = kernel.u.sum();

    write_artifacts(c, {{"sup_kernel.csv", sup_kernel_csv(kernel)},
                        {"manifest.json", manifest.dump(2) + "\n"}});
    return 0;
}

int run_dsum_job(const RunConfig& c) {
    const int level = c.levels.front();
    guard_refinement(c, level);
    const SpatialGrid grid(level, c.half_width);
    const CoefficientField coeffs = CoefficientField::sample(c.recipe, grid);

    DiscreteSumSpec spec = [&] {
        if (c.psi_kind == "table")
            return DiscreteSumSpec::from_matrix(read_psi_csv(c.psi_path, grid), c.dsum_period,
                                                c.dsum_periods);
        RealVector g(grid.size());
        for (Eigen::Index i = 0; i < grid.size(); ++i)
            g[i] = grid.point(i);
        return c.psi_kind == "displacement"
                   ? DiscreteSumSpec::separable(grid, g, c.dsum_period, c.dsum_periods)
                   : DiscreteSumSpec::of_arrival(grid, g, c.dsum_period, c.dsum_periods);
    }();
    const JointKernelFT kernel = dsum_kernel(grid, coeffs, spec, c.freqs, c.method);

    auto manifest = manifest_header(c);
    manifest["grid"] = {{"level", level}, {"half_width", c.half_width}, {"step", grid.step()}};
    manifest["coefficients"] = describe_recipe(c.recipe);
    manifest["period"] = c.dsum_period;
    manifest["periods"] = c.dsum_periods;
    manifest["t"] = kernel.t;
    manifest["hermitian_defect"] = kernel.hermitian_defect;

    write_artifacts(c, {{"dsum_kernel.csv", kernel_csv(kernel)},
                        {"manifest.json", manifest.dump(2) + "\n"}});
    return 0;
}

int run_convergence_job(const RunConfig& c) {
    for (const int level : c.levels)
        guard_refinement(c, level);
    const ConvergenceReport report =
        c.convergence_kind == "kernel"
            ? convergence_experiment(c.recipe, c.half_width, c.levels, c.t, c.disc_radius,
                                     c.method)
            : euler_gap_experiment(c.recipe, c.half_width, c.levels, c.t, c.disc_radius,
                                   c.method.safety);

    auto manifest = manifest_header(c);
    manifest["report"] = convergence_report_json(report);
    write_artifacts(c, {{"convergence.csv", convergence_csv(report)},
                        {"manifest.json", manifest.dump(2) + "\n"}});
    return 0;
}

int run_validate_job(const RunConfig& c) {
    const std::vector<CheckResult> checks = run_validation_suite(c.tolerances);
    bool all_pass = true;
    nlohmann::ordered_json listing = nlohmann::ordered_json::array();
    for (const auto& check : checks) {
        all_pass = all_pass && check.pass;
        std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name
                  << " (metric=" << check.metric << ", tolerance=" << check.tolerance << ")\n";
        listing.push_back({{"name", check.name},
                           {"pass", check.pass},
                           {"metric", check.metric},
                           {"tolerance", check.tolerance}});
    }
    auto manifest = manifest_header(c);
    manifest["checks"] = listing;
    manifest["pass"] = all_pass;
    write_artifacts(c, {{"validation.json", manifest.dump(2) + "\n"}});
    return all_pass ? 0 : 1;
}

} // namespace

int run_job(const RunConfig& config) {
    if (config.job == "kernel")
        return run_kernel_job(config);
    if (config.job == "sup")
        return run_sup_job(config);
    if (config.job == "dsum")
        return run_dsum_job(config);
    if (config.job == "convergence")
        return run_convergence_job(config);
    if (config.job == "validate")
        return run_validate_job(config);
    throw ConfigError("unknown job: " + config.job);
}

} // namespace latkern
