// snw: forge, certify and analyze Schmidt-number witnesses.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snw/certify.hpp"
#include "snw/forge.hpp"
#include "snw/json_io.hpp"
#include "snw/noise.hpp"
#include "snw/seesaw.hpp"
#include "snw/temporal.hpp"
#include "snw/witness.hpp"

namespace {

// Certificates accept the achieved threshold when the rigorous bound reaches
// it up to solver accuracy.
constexpr double kProofSlack = 1e-6;

std::string resolve_out(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  const char* dir = std::getenv("SNW_OUTPUT_DIR");
  if (!dir || !*dir) return path;
  return (std::filesystem::path(dir) / p).string();
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    snw::write_text_file(resolve_out(out_path), content);
}

// Rigorous lower bound on min Tr(W-tilde rho) over Schmidt number <= k,
// via the closed forms where they apply and the dual SDP otherwise.
double wtilde_proven_bound(int d, int k, const snw::LMIOptions& lmi) {
  if (d >= 4 && k >= 3) return snw::symmetric_bound(d, k).bound;
  if (d >= 4) return snw::quartic_bound(d, k, lmi).bound;
  return snw::dual_bound_sdp(snw::build_Wtilde(d), k, lmi).y_star;
}

int cmd_thresholds(const std::vector<int>& dims, const std::string& format,
                   const std::string& out_path) {
  snw::LMIOptions lmi;
  std::ostringstream os;
  nlohmann::json rows = nlohmann::json::array();
  if (format == "csv") os << "d,k,abs_C,abs_C_R\n";
  for (int d : dims) {
    for (int k = 1; k <= d; ++k) {
      const double ck = snw::ck_threshold(d, k);
      const double ckr = -wtilde_proven_bound(d, k, lmi);
      if (format == "csv") {
        os << d << ',' << k << ',' << std::fixed << std::setprecision(3) << ck << ',' << ckr
           << '\n';
        os.unsetf(std::ios::fixed);
      } else {
        rows.push_back({{"d", d}, {"k", k}, {"abs_C", ck}, {"abs_C_R", ckr}});
      }
    }
  }
  emit(out_path, format == "csv" ? os.str() : rows.dump(2) + "\n");
  return 0;
}

int cmd_forge(int d, int k, const std::string& mask_name, const std::string& target,
              std::uint64_t seed, int restarts, double bisect_tol, const std::string& out_path,
              const std::string& trace_path) {
  snw::ForgeOptions opts;
  opts.d = d;
  opts.k = k;
  if (target != "phi-plus") throw std::invalid_argument("unsupported target: " + target);
  opts.target = snw::phi_plus(d);
  if (mask_name == "linear")
    opts.mask = snw::linear_mask(d);
  else if (mask_name == "full")
    opts.mask = snw::full_mask(d);
  else
    throw std::invalid_argument("unsupported mask: " + mask_name);
  opts.c_bisect_tol = bisect_tol;
  opts.seesaw.seed = seed;
  opts.seesaw.restarts = restarts;

  const snw::ForgeResult res = snw::forge_witness(opts);

  const snw::SeesawResult sr = snw::min_overlap_rank_k(res.candidate.op, k, opts.seesaw);
  const snw::CertificateReport cert = [&] {
    snw::CertifyOptions copts;
    snw::CertificateReport rep = snw::certify(res.candidate.op, k, sr.best_value, copts);
    rep.status = rep.proven_bound >= res.candidate.threshold_C - kProofSlack
                     ? snw::CertifyStatus::proved
                     : snw::CertifyStatus::conjectured;
    return rep;
  }();

  emit(out_path, snw::witness_to_json(res.candidate, &cert).dump(2) + "\n");
  if (!trace_path.empty())
    emit(trace_path, snw::forge_trace_to_json(res.trace).dump(2) + "\n");
  std::cerr << "forged d=" << d << " k=" << k << " C=" << res.candidate.threshold_C
            << " certificate=" << snw::to_string(cert.status) << " ("
            << snw::to_string(cert.method) << ", proven " << cert.proven_bound << ")\n";
  return cert.status == snw::CertifyStatus::proved ? 0 : 2;
}

int cmd_certify(const std::string& witness_path, int k_override, int restarts,
                std::uint64_t seed, const std::string& out_path) {
  const snw::WitnessCandidate cand = snw::witness_from_json(snw::read_json_file(witness_path));
  const int k = k_override > 0 ? k_override : cand.k_target;
  snw::SeesawOptions sopts;
  sopts.restarts = restarts;
  sopts.seed = seed;
  const snw::SeesawResult sr = snw::min_overlap_rank_k(cand.op, k, sopts);

  snw::CertificateReport rep = snw::certify(cand.op, k, sr.best_value);
  rep.status = rep.proven_bound >= cand.threshold_C - kProofSlack
                   ? snw::CertifyStatus::proved
                   : snw::CertifyStatus::conjectured;
  emit(out_path, snw::certificate_to_json(rep).dump(2) + "\n");
  return rep.status == snw::CertifyStatus::proved ? 0 : 2;
}

int cmd_noise(int d, int grid, const std::string& mode, const std::string& out_path) {
  snw::LMIOptions lmi;
  std::vector<double> thresholds;
  for (int k = 1; k < d; ++k)
    thresholds.push_back(mode == "proven" ? wtilde_proven_bound(d, k, lmi)
                                          : -snw::ck_threshold(d, k));
  const auto rows = snw::noise_table(d, grid, thresholds, mode);
  emit(out_path, snw::noise_table_to_csv(rows));
  return 0;
}

int cmd_plan(int d, const std::string& type, const std::string& out_path) {
  const snw::MeasurementPlan plan =
      type == "forged" ? snw::plan_forged(d) : snw::plan_standard(d);
  emit(out_path, snw::plan_to_csv(plan));
  std::cerr << "plan " << type << " d=" << d << ": " << plan.quoted_setting_count()
            << " settings\n";
  return 0;
}

int cmd_seesaw(const std::string& witness_path, int k_override, int restarts, std::uint64_t seed,
               const std::string& out_path) {
  const snw::WitnessCandidate cand = snw::witness_from_json(snw::read_json_file(witness_path));
  const int k = k_override > 0 ? k_override : cand.k_target;
  snw::SeesawOptions sopts;
  sopts.restarts = restarts;
  sopts.seed = seed;
  const snw::SeesawResult sr = snw::min_overlap_rank_k(cand.op, k, sopts);

  nlohmann::json j;
  j["d"] = cand.d;
  j["k"] = k;
  j["best_value"] = sr.best_value;
  j["cycles_used"] = sr.cycles_used;
  j["restarts"] = sr.restarts;
  j["converged"] = sr.converged;
  j["monotone"] = sr.monotone;
  nlohmann::json amp_re = nlohmann::json::array(), amp_im = nlohmann::json::array();
  for (const snw::cplx& a : sr.best_state.amp) {
    amp_re.push_back(a.real());
    amp_im.push_back(a.imag());
  }
  j["state_re"] = std::move(amp_re);
  j["state_im"] = std::move(amp_im);
  emit(out_path, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schmidt-number witness toolbox"};
  app.require_subcommand(1);

  int d = 4, k = 1, restarts = 30, grid = 101;
  std::uint64_t seed = 1;
  double bisect_tol = 1e-3;
  std::string mask = "linear", target = "phi-plus", format = "csv", mode = "proven";
  std::string plan_type = "standard", witness_path, out_path, trace_path;
  std::vector<int> dims{4, 7, 11};

  auto* forge = app.add_subcommand("forge", "Forge a sparse witness candidate");
  forge->add_option("--d", d, "local dimension")->required()->check(CLI::Range(2, 16));
  forge->add_option("--k", k, "Schmidt number to bound")->required();
  forge->add_option("--mask", mask)->check(CLI::IsMember({"linear", "full"}));
  forge->add_option("--target", target);
  forge->add_option("--seed", seed);
  forge->add_option("--restarts", restarts);
  forge->add_option("--bisect-tol", bisect_tol);
  forge->add_option("--out", out_path, "witness JSON output");
  forge->add_option("--trace", trace_path, "iteration trace JSON output");

  auto* thresholds = app.add_subcommand("thresholds", "Conjectured and proven threshold table");
  thresholds->add_option("--d", dims, "dimensions");
  thresholds->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  thresholds->add_option("--out", out_path);

  auto* certify = app.add_subcommand("certify", "Certify a witness file");
  certify->add_option("--witness", witness_path)->required()->check(CLI::ExistingFile);
  int k_override = 0;
  certify->add_option("--k", k_override, "override k from the file");
  certify->add_option("--restarts", restarts);
  certify->add_option("--seed", seed);
  certify->add_option("--out", out_path);

  auto* noise = app.add_subcommand("noise", "White-noise robustness table");
  noise->add_option("--d", d)->required()->check(CLI::Range(3, 16));
  noise->add_option("--grid", grid)->check(CLI::Range(2, 100000));
  noise->add_option("--threshold-mode", mode)->check(CLI::IsMember({"proven", "conjectured"}));
  noise->add_option("--out", out_path);

  auto* plan = app.add_subcommand("plan", "Measurement plan CSV");
  plan->add_option("--d", d)->required()->check(CLI::Range(2, 64));
  plan->add_option("--type", plan_type)->check(CLI::IsMember({"standard", "forged"}));
  plan->add_option("--out", out_path);

  auto* seesaw = app.add_subcommand("seesaw", "See-saw minimization over rank-k states");
  seesaw->add_option("--witness", witness_path)->required()->check(CLI::ExistingFile);
  seesaw->add_option("--k", k_override);
  seesaw->add_option("--restarts", restarts);
  seesaw->add_option("--seed", seed);
  seesaw->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(forge))
      return cmd_forge(d, k, mask, target, seed, restarts, bisect_tol, out_path, trace_path);
    if (app.got_subcommand(thresholds)) return cmd_thresholds(dims, format, out_path);
    if (app.got_subcommand(certify))
      return cmd_certify(witness_path, k_override, restarts, seed, out_path);
    if (app.got_subcommand(noise)) return cmd_noise(d, grid, mode, out_path);
    if (app.got_subcommand(plan)) return cmd_plan(d, plan_type, out_path);
    if (app.got_subcommand(seesaw))
      return cmd_seesaw(witness_path, k_override, restarts, seed, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
