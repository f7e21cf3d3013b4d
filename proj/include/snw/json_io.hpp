#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "snw/certify.hpp"
#include "snw/forge.hpp"
#include "snw/witness.hpp"

namespace snw {

namespace detail {

// Attach an exact num/den pair when v * den is integral; the float field
// always stays authoritative for round-tripping.
inline void maybe_fraction(nlohmann::json& entry, const std::string& prefix, double v, int den) {
  const double scaled = v * den;
  const double nearest = std::round(scaled);
  if (std::abs(scaled - nearest) < 1e-12 && std::abs(nearest) < 1e15) {
    entry[prefix + "_num"] = static_cast<long long>(nearest);
    entry[prefix + "_den"] = den;
  }
}

}  // namespace detail

inline nlohmann::json certificate_to_json(const CertificateReport& rep) {
  nlohmann::json j;
  j["d"] = rep.d;
  j["k"] = rep.k;
  j["proven_bound"] = rep.proven_bound;
  j["conjectured_bound"] = rep.conjectured_bound;
  j["method"] = to_string(rep.method);
  j["status"] = to_string(rep.status);
  j["gap"] = rep.gap;
  return j;
}

inline CertificateReport certificate_from_json(const nlohmann::json& j) {
  CertificateReport rep;
  rep.d = j.at("d").get<int>();
  rep.k = j.at("k").get<int>();
  rep.proven_bound = j.at("proven_bound").get<double>();
  rep.conjectured_bound = j.at("conjectured_bound").get<double>();
  const std::string m = j.at("method").get<std::string>();
  if (m == "full_sdp")
    rep.method = CertifyMethod::full_sdp;
  else if (m == "symmetric_closed_form")
    rep.method = CertifyMethod::symmetric_closed_form;
  else if (m == "quartic_root")
    rep.method = CertifyMethod::quartic_root;
  else if (m == "lagrange_k1")
    rep.method = CertifyMethod::lagrange_k1;
  else
    throw std::invalid_argument("certificate_from_json: unknown method " + m);
  const std::string s = j.at("status").get<std::string>();
  if (s == "proved")
    rep.status = CertifyStatus::proved;
  else if (s == "conjectured")
    rep.status = CertifyStatus::conjectured;
  else
    throw std::invalid_argument("certificate_from_json: unknown status " + s);
  rep.gap = j.at("gap").get<double>();
  return rep;
}

// Witness file: every mask quadruple is listed (zeros included), so the mask
// round-trips with the operator.
inline nlohmann::json witness_to_json(const WitnessCandidate& cand,
                                      const CertificateReport* cert = nullptr) {
  const int d = cand.d;
  nlohmann::json j;
  j["d"] = d;
  j["k"] = cand.k_target;
  j["threshold_C"] = cand.threshold_C;
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& q : cand.mask.indices()) {
    const cplx v = cand.op(q[0] * d + q[1], q[2] * d + q[3]);
    nlohmann::json e;
    e["i"] = q[0];
    e["j"] = q[1];
    e["k"] = q[2];
    e["l"] = q[3];
    e["re"] = v.real();
    e["im"] = v.imag();
    detail::maybe_fraction(e, "re", v.real(), d);
    detail::maybe_fraction(e, "im", v.imag(), d);
    coeffs.push_back(std::move(e));
  }
  j["coefficients"] = std::move(coeffs);
  if (cert) j["certificate"] = certificate_to_json(*cert);
  return j;
}

inline WitnessCandidate witness_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  if (d < 2) throw std::invalid_argument("witness_from_json: d >= 2 required");
  WitnessCandidate cand;
  cand.d = d;
  cand.k_target = j.at("k").get<int>();
  cand.threshold_C = j.at("threshold_C").get<double>();

  ComplexMatrix m(d * d, d * d);
  std::set<IndexQuad> mask_idx;
  for (const auto& e : j.at("coefficients")) {
    const IndexQuad q{e.at("i").get<int>(), e.at("j").get<int>(), e.at("k").get<int>(),
                      e.at("l").get<int>()};
    for (int v : q)
      if (v < 0 || v >= d) throw std::invalid_argument("witness_from_json: index out of range");
    double re = e.at("re").get<double>();
    double im = e.at("im").get<double>();
    if (e.contains("re_num")) re = e.at("re_num").get<double>() / e.at("re_den").get<double>();
    if (e.contains("im_num")) im = e.at("im_num").get<double>() / e.at("im_den").get<double>();
    if (mask_idx.count(q)) throw std::invalid_argument("witness_from_json: duplicate coefficient");
    mask_idx.insert(q);
    m(q[0] * d + q[1], q[2] * d + q[3]) = cplx(re, im);
  }
  cand.mask = CoefficientMask(d, std::move(mask_idx));  // checks conjugation closure
  cand.op = HermitianOperator(m);                       // checks Hermiticity
  return cand;
}

inline nlohmann::json forge_trace_to_json(const ForgeTrace& trace) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : trace.records) {
    nlohmann::json e;
    e["c_min"] = r.c_min;
    e["c_max"] = r.c_max;
    e["c"] = r.c;
    e["num_cuts"] = r.num_cuts;
    e["sdp_status"] = r.sdp_status;
    e["sdp_margin"] = r.sdp_margin;
    if (std::isnan(r.seesaw_value))
      e["seesaw_value"] = nullptr;
    else
      e["seesaw_value"] = r.seesaw_value;
    arr.push_back(std::move(e));
  }
  return nlohmann::json{{"iterations", std::move(arr)}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  nlohmann::json j;
  f >> j;
  return j;
}

}  // namespace snw
