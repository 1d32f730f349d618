#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdlab/assembly.hpp"
#include "sdlab/experiments.hpp"
#include "sdlab/minres.hpp"
#include "sdlab/mms.hpp"
#include "sdlab/spectrum.hpp"

namespace sdlab {

/// git describe of the source tree at configure time.
std::string version();

inline constexpr int kSummarySchema = 1;

/// iteration,residual,relative_residual,theta_closest,F_k
void write_solve_log_csv(const std::filesystem::path& path, const SolveLog& log);

/// index,eigenvalue
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec);
nlohmann::json spectrum_summary(const Spectrum& spec);

/// h,nref,dofs,e_grad_uS,e_pS,e_div_uD,e_pD,rate_grad_uS,rate_pS,rate_div_uD,rate_pD
void write_mms_csv(const std::filesystem::path& path, const std::vector<MmsRow>& rows);
std::string format_mms_table(const std::vector<MmsRow>& rows);

/// case,mu,K,alpha,nref,h,dofs,deflated,kappa,kappa_eff,lambda_min,lambda_next,lambda_max
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

/// Writes `csv_path` + ".json" with the config, version, timings and extra fields.
void write_sidecar(const std::filesystem::path& csv_path, const nlohmann::json& summary);

/// One "row col value" line per stored entry, zero-based.
void write_coo(const std::filesystem::path& path, const SparseMatrix& M);

}  // namespace sdlab
