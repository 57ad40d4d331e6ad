#include "dfrc/report_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dfrc/config.hpp"

namespace dfrc {

namespace {

std::ofstream open_artifact(const std::string& path,
                            const ScenarioConfig& cfg) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF endings
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# seed\t" << cfg.rng_seed << "\n";
  out << "# config\t" << scenario_hash(cfg) << "\n";
  return out;
}

/// Shortest decimal form that round-trips to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_solver_trace(const std::string& path, const SolverReport& report,
                        const ScenarioConfig& cfg) {
  std::ofstream out = open_artifact(path, cfg);
  out << "iteration\ttime_s\trelative_entropy\tmui_energy\tprimal_residual"
         "\tdual_residual\n";
  for (std::size_t i = 0; i < report.objective_trace.size(); ++i) {
    out << i << '\t' << fmt(report.time_trace[i]) << '\t'
        << fmt(report.objective_trace[i]) << '\t' << fmt(report.mui_trace[i])
        << '\t' << fmt(report.residual_trace[i].first) << '\t'
        << fmt(report.residual_trace[i].second) << '\n';
  }
}

void write_roc_curve(const std::string& path, const RocCurve& curve,
                     const ScenarioConfig& cfg) {
  std::ofstream out = open_artifact(path, cfg);
  out << "# trials\t" << curve.trials << "\n";
  out << "pfa\tpd\n";
  for (Eigen::Index i = 0; i < curve.pfa_grid.size(); ++i)
    out << fmt(curve.pfa_grid(i)) << '\t' << fmt(curve.pd(i)) << '\n';
}

void write_ber_curve(const std::string& path, const BerCurve& curve,
                     const ScenarioConfig& cfg) {
  std::ofstream out = open_artifact(path, cfg);
  out << "# trials\t" << curve.trials << "\n";
  out << "snr_db\tber\n";
  for (Eigen::Index i = 0; i < curve.snr_grid_db.size(); ++i)
    out << fmt(curve.snr_grid_db(i)) << '\t' << fmt(curve.ber(i)) << '\n';
}

void write_xy_curve(const std::string& path, const std::string& x_name,
                    const std::string& y_name,
                    const std::vector<double>& x_values,
                    const std::vector<double>& y_values,
                    const ScenarioConfig& cfg) {
  if (x_values.size() != y_values.size())
    throw std::invalid_argument("write_xy_curve: size mismatch");
  std::ofstream out = open_artifact(path, cfg);
  out << x_name << '\t' << y_name << '\n';
  for (std::size_t i = 0; i < x_values.size(); ++i)
    out << fmt(x_values[i]) << '\t' << fmt(y_values[i]) << '\n';
}

void write_constellation(const std::string& path, const CxMatrix& received,
                         const CxMatrix& symbols, const ScenarioConfig& cfg) {
  if (received.rows() != symbols.rows() || received.cols() != symbols.cols())
    throw std::invalid_argument("write_constellation: shape mismatch");
  std::ofstream out = open_artifact(path, cfg);
  out << "user\tslot\trx_re\trx_im\tsym_re\tsym_im\n";
  for (Eigen::Index m = 0; m < received.rows(); ++m)
    for (Eigen::Index i = 0; i < received.cols(); ++i)
      out << m << '\t' << i << '\t' << fmt(received(m, i).real()) << '\t'
          << fmt(received(m, i).imag()) << '\t' << fmt(symbols(m, i).real())
          << '\t' << fmt(symbols(m, i).imag()) << '\n';
}

void write_manifest(const std::string& path, const ScenarioConfig& cfg,
                    const std::string& experiment,
                    const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "experiment = " << experiment << "\n";
  out << "config_hash = " << scenario_hash(cfg) << "\n\n";
  out << scenario_to_text(cfg) << "\n";
  out << "[artifacts]\n";
  for (const ManifestEntry& e : entries)
    out << e.artifact << " = " << e.algorithm << ", "
        << (e.converged ? "converged" : "not-converged") << "\n";
}

}  // namespace dfrc
