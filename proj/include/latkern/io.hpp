#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "latkern/abelian_ext.hpp"
#include "latkern/analysis.hpp"
#include "latkern/lattice.hpp"
#include "latkern/oracles.hpp"
#include "latkern/propagation.hpp"

namespace latkern {

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// One number when imag == 0, otherwise "re+imi" in one field.
std::string format_complex(Complex v);

void write_text_file(const std::string& path, const std::string& content);

/// Rows ordered x-major, then x', then frequency.
std::string kernel_csv(const JointKernelFT& kernel);

/// Rows ordered x-major, then x', then offset.
std::string density_csv(const JointDensity& density);

std::string sup_kernel_csv(const SupJointKernel& kernel);

std::string convergence_csv(const ConvergenceReport& report);

std::string path_table_csv(const PathEnumeration& paths);

/// psi table rows (x1, x2, value); coordinate pairs must be lattice sites
/// and every pair must be covered.
RealMatrix read_psi_csv(const std::string& path, const SpatialGrid& grid);

nlohmann::ordered_json convergence_report_json(const ConvergenceReport& report);

} // namespace latkern
