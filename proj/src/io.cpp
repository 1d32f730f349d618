#include "sdlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sdlab/error.hpp"

#ifndef SDLAB_VERSION
#define SDLAB_VERSION "unknown"
#endif

namespace sdlab {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

std::string version() { return SDLAB_VERSION; }

void write_solve_log_csv(const std::filesystem::path& path, const SolveLog& log) {
  auto out = open_out(path);
  out << "iteration,residual,relative_residual,theta_closest,F_k\n";
  const double r0 = log.residuals.empty() ? 1.0 : log.residuals.front();
  for (std::size_t k = 0; k < log.residuals.size(); ++k) {
    out << k << ',' << log.residuals[k] << ',' << (r0 > 0.0 ? log.residuals[k] / r0 : 0.0) << ',';
    if (k >= 1 && k - 1 < log.theta_closest.size()) out << log.theta_closest[k - 1];
    out << ',';
    if (k >= 1 && k - 1 < log.Fk.size()) out << log.Fk[k - 1];
    out << '\n';
  }
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec) {
  auto out = open_out(path);
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) out << i << ',' << spec.eigenvalues[i] << '\n';
}

nlohmann::json spectrum_summary(const Spectrum& spec) {
  return {{"size", spec.eigenvalues.size()},
          {"eliminated", spec.eliminated},
          {"drop", spec.drop},
          {"kappa", spec.kappa},
          {"kappa_eff", spec.kappa_eff},
          {"hull", {spec.hull.a, spec.hull.b, spec.hull.c, spec.hull.d}}};
}

void write_mms_csv(const std::filesystem::path& path, const std::vector<MmsRow>& rows) {
  auto out = open_out(path);
  out << "h,nref,dofs,e_grad_uS,e_pS,e_div_uD,e_pD,rate_grad_uS,rate_pS,rate_div_uD,rate_pD\n";
  const auto rates = convergence_rates(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << r.h << ',' << r.nref << ',' << r.dofs;
    for (double e : r.error) out << ',' << e;
    for (int k = 0; k < 4; ++k) {
      out << ',';
      if (i > 0) out << rates[i - 1][k];
    }
    out << '\n';
  }
}

std::string format_mms_table(const std::vector<MmsRow>& rows) {
  const auto rates = convergence_rates(rows);
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-9s | %-18s %-18s | %-18s %-18s\n", "h", "|grad(uS-uSh)|", "|pS-pSh|",
                "|div(uD-uDh)|", "|pD-pDh|");
  os << buf;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-9.2E |", rows[i].h);
    os << buf;
    for (int k = 0; k < 4; ++k) {
      if (i == 0) {
        std::snprintf(buf, sizeof buf, " %.4E(--)    ", rows[i].error[k]);
      } else {
        std::snprintf(buf, sizeof buf, " %.4E(%.2f)  ", rows[i].error[k], rates[i - 1][k]);
      }
      os << buf;
      if (k == 1) os << "|";
    }
    os << '\n';
  }
  return os.str();
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "case,mu,K,alpha,nref,h,dofs,deflated,kappa,kappa_eff,lambda_min,lambda_next,lambda_max\n";
  for (const auto& r : rows) {
    out << to_string(r.config) << ',' << r.mu << ',' << r.K << ',' << r.alpha << ',' << r.nref << ',' << r.h << ','
        << r.dofs << ',' << (r.deflated ? 1 : 0) << ',' << r.kappa << ',' << r.kappa_eff << ',' << r.lambda_min << ','
        << r.lambda_next << ',' << r.lambda_max << '\n';
  }
}

void write_sidecar(const std::filesystem::path& csv_path, const nlohmann::json& summary) {
  nlohmann::json doc = summary;
  doc["schema"] = kSummarySchema;
  doc["version"] = version();
  doc["csv"] = csv_path.filename().string();
  auto out = open_out(csv_path.string() + ".json");
  out << doc.dump(2) << '\n';
}

void write_coo(const std::filesystem::path& path, const SparseMatrix& M) {
  auto out = open_out(path);
  for (int k = 0; k < M.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(M, k); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  }
}

}  // namespace sdlab
