#ifndef DFRC_REPORT_IO_HPP
#define DFRC_REPORT_IO_HPP

#include <string>
#include <vector>

#include "dfrc/eval.hpp"
#include "dfrc/outer.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// Artifacts are tab-separated UTF-8 text with LF line endings. Every file
/// starts with comment lines carrying the seed and the config hash, then a
/// header row, then one row per record.

void write_solver_trace(const std::string& path, const SolverReport& report,
                        const ScenarioConfig& cfg);

void write_roc_curve(const std::string& path, const RocCurve& curve,
                     const ScenarioConfig& cfg);

void write_ber_curve(const std::string& path, const BerCurve& curve,
                     const ScenarioConfig& cfg);

/// Generic (x, y) curve, e.g. entropy versus a sweep parameter.
void write_xy_curve(const std::string& path, const std::string& x_name,
                    const std::string& y_name,
                    const std::vector<double>& x_values,
                    const std::vector<double>& y_values,
                    const ScenarioConfig& cfg);

/// Received constellation beside the intended symbols, one row per (user,
/// slot) pair.
void write_constellation(const std::string& path, const CxMatrix& received,
                         const CxMatrix& symbols, const ScenarioConfig& cfg);

/// Run manifest: full config text, seed, artifact list, and solver
/// convergence flags, in structured text.
struct ManifestEntry {
  std::string artifact;
  std::string algorithm;
  bool converged = true;
};

void write_manifest(const std::string& path, const ScenarioConfig& cfg,
                    const std::string& experiment,
                    const std::vector<ManifestEntry>& entries);

}  // namespace dfrc

#endif  // DFRC_REPORT_IO_HPP
