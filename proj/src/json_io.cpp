#include "undistill/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "undistill/error.hpp"

namespace undistill::io {

namespace {

Complex parse_entry(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw Error(ErrorKind::kParse, "entries must be [re, im] pairs");
}

Dims parse_dims(const Json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw Error(ErrorKind::kParse, "missing or empty \"dims\" array");
  }
  Dims dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw Error(ErrorKind::kParse, "\"dims\" entries must be positive integers");
    }
    dims.push_back(d.get<std::size_t>());
  }
  return dims;
}

std::size_t parse_size(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 1) {
    throw Error(ErrorKind::kParse, std::string("\"") + key + "\" must be a positive integer");
  }
  return j[key].get<std::size_t>();
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write(std::ostringstream& os, const Json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      pad(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Short numeric arrays (dims, [re, im] pairs) stay on one line.
      const bool inline_array =
          j.size() <= 8 && std::all_of(j.begin(), j.end(), [](const Json& e) {
            return e.is_primitive();
          });
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (inline_array && indent > 0 ? ", " : ",");
        first = false;
        if (!inline_array) pad(depth + 1);
        write(os, e, indent, depth + 1);
      }
      if (!inline_array) pad(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

void flatten_into(const Json& j, const std::string& path, bool csv, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten_into(it.value(), path.empty() ? it.key() : path + "." + it.key(), csv, os);
    }
    return;
  }
  if (j.is_array() && !j.empty() && !(j.size() == 2 && j[0].is_number())) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten_into(j[i], path + "[" + std::to_string(i) + "]", csv, os);
    }
    return;
  }
  std::string value;
  if (j.is_string()) {
    value = j.get<std::string>();
    if (csv) value = Json(value).dump();
  } else {
    value = dump(j, 0);
    if (csv && value.find(',') != std::string::npos) value = "\"" + value + "\"";
  }
  os << path << (csv ? "," : " = ") << value << '\n';
}

}  // namespace

DensityMatrix state_from_json(const Json& j) {
  const Dims dims = parse_dims(j);
  if (!j.contains("matrix") || !j["matrix"].is_array()) {
    throw Error(ErrorKind::kParse, "missing \"matrix\" array");
  }
  const auto& rows = j["matrix"];
  const auto n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorKind::kParse, "\"matrix\" must be square");
    }
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = parse_entry(row[static_cast<std::size_t>(c)]);
  }
  return DensityMatrix(dims, std::move(m));
}

TripartitePureState pure_state_from_json(const Json& j) {
  const Dims dims = parse_dims(j);
  if (dims.size() != 3) throw Error(ErrorKind::kParse, "pure states need dims [d_A, d_B, d_E]");
  if (!j.contains("vector") || !j["vector"].is_array()) {
    throw Error(ErrorKind::kParse, "missing \"vector\" array");
  }
  const auto& entries = j["vector"];
  ComplexVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_entry(entries[i]);
  }
  return TripartitePureState(dims, std::move(v));
}

ChoiChannel channel_from_json(const Json& j) {
  const std::size_t d_in = parse_size(j, "d_in");
  const std::size_t d_out = parse_size(j, "d_out");
  if (!j["choi"].is_object()) throw Error(ErrorKind::kParse, "\"choi\" must be a state object");
  return channels::channel_from_choi(state_from_json(j["choi"]), d_in, d_out);
}

InputDocument parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kParse, "top-level JSON value must be an object");
  try {
    if (j.contains("choi")) return channel_from_json(j);
    if (j.contains("vector")) return pure_state_from_json(j);
    if (j.contains("matrix")) return state_from_json(j);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
  throw Error(ErrorKind::kParse, "document has none of \"choi\", \"vector\", \"matrix\"");
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Json to_json(const DensityMatrix& rho) {
  return Json{{"dims", rho.dims()}, {"matrix", matrix_to_json(rho.matrix())}};
}

Json to_json(const TripartitePureState& psi) {
  return Json{{"dims", psi.dims()}, {"vector", vector_to_json(psi.amplitudes())}};
}

Json to_json(const ChoiChannel& channel) {
  return Json{{"d_in", channel.d_in()}, {"d_out", channel.d_out()}, {"choi", to_json(channel.choi())}};
}

Json to_json(const states::PptVerdict& v) {
  return Json{{"ppt", v.ppt}, {"witness", v.witness}, {"marginal", v.marginal}};
}

namespace {

Json status_json(const distill::StatusWithReason& s) {
  return Json{{"status", distill::to_string(s.status)}, {"reason", s.reason}};
}

Json reduction_json(const distill::ReductionAnalysis& a) {
  const std::string x = a.label.substr(1);
  Json j;
  j["dims"] = a.dims;
  j["rank"] = a.r;
  j["rank_A"] = a.r_a;
  j["rank_" + x] = a.r_x;
  j["ppt"] = to_json(a.ppt);
  j["coherent_information"] = a.coherent_information;
  if (a.low_rank_bound_x) j["theorem1_bound_" + x] = *a.low_rank_bound_x;
  if (a.low_rank_bound_a) j["theorem1_bound_A"] = *a.low_rank_bound_a;
  if (a.filtered_rate_x) j["filtered_hashing_rate_" + x] = *a.filtered_rate_x;
  if (a.filtered_rate_a) j["filtered_hashing_rate_A"] = *a.filtered_rate_a;
  Json w;
  w["searched"] = a.witness_search_run;
  if (a.witness) {
    w["found"] = a.witness->found();
    w["trials_used"] = a.witness->trials_used;
    if (a.witness->found()) w["phi"] = vector_to_json(*a.witness->phi);
    else w["result"] = "no 1-way certificate found";
  }
  w["all_phi_rank_deficit_heuristic"] = a.all_phi_rank_deficit_heuristic;
  if (a.all_phi_rank_deficit_heuristic) {
    w["cited_implication"] =
        "if rank rho^phi_" + x + " < min{rank rho, rank rho_" + x +
        "} for all phi then the reduction is 2-way distillable (heuristic: finite budget)";
  }
  j["witness_search"] = std::move(w);
  j["one_way"] = status_json(a.one_way);
  j["two_way"] = status_json(a.two_way);
  return j;
}

}  // namespace

Json to_json(const distill::DistillabilityReport& r) {
  Json j;
  j["dims"] = r.dims;
  j["ranks"] = Json{{"r", r.r}, {"r_A", r.r_a}, {"r_B", r.r_b}, {"r_E", r.r_e}};
  j["ppt_AB"] = to_json(r.ab.ppt);
  j["ppt_AE"] = to_json(r.ae.ppt);
  if (r.ab.low_rank_bound_x) j["theorem1_bound_B"] = *r.ab.low_rank_bound_x;
  if (r.ab.low_rank_bound_a) j["theorem1_bound_A"] = *r.ab.low_rank_bound_a;
  j["hashing_rate"] = r.ab.coherent_information;
  if (r.ab.witness && r.ab.witness->found()) j["witness_phi"] = vector_to_json(*r.ab.witness->phi);
  j["classification"] = distill::to_string(r.classification);
  Json flagged = Json::array();
  if (!r.ab.ppt.ppt) flagged.push_back("AB");
  if (!r.ae.ppt.ppt) flagged.push_back("AE");
  j["npt_reductions"] = std::move(flagged);
  j["rates"] = Json{{"ab_2way_ae_2way", status_json(r.rates.ab_2way_ae_2way)},
                    {"ab_2way_ae_1way", status_json(r.rates.ab_2way_ae_1way)},
                    {"ab_1way_ae_2way", status_json(r.rates.ab_1way_ae_2way)},
                    {"ab_1way_ae_1way", status_json(r.rates.ab_1way_ae_1way)}};
  j["reductions"] = Json{{"AB", reduction_json(r.ab)}, {"AE", reduction_json(r.ae)}};
  return j;
}

Json to_json(const distill::RankRegimeRecord& rec) {
  return Json{{"r", rec.r},
              {"r_A", rec.r_a},
              {"r_B", rec.r_b},
              {"r_E", rec.r_e},
              {"r_AE", rec.r_ae},
              {"complement_rank_pattern", rec.complement_rank_pattern},
              {"ppt_equals_separable_regime", rec.ppt_equals_separable_regime},
              {"strict_low_rank", rec.strict_low_rank},
              {"ppt", to_json(rec.ppt)},
              {"verdict", distill::to_string(rec.verdict)}};
}

Json to_json(const EnsembleReport& report) {
  const auto& s = report.spec;
  Json j;
  j["spec"] = Json{{"d_A", s.d_a}, {"d_B", s.d_b}, {"d_E", s.d_e},
                   {"n_samples", s.n_samples}, {"seed", s.seed}, {"rank_tol", s.rank_tol}};
  j["witness_budget"] = report.witness_budget;
  j["counts"] = Json{{"rank_AB_generic", report.count_rank_ab},
                     {"rank_B_generic", report.count_rank_b},
                     {"columns_full_schmidt_rank", report.count_schmidt},
                     {"witness_found", report.count_witness}};
  j["frequencies"] = Json{{"rank_AB_generic", report.freq_rank_ab()},
                          {"rank_B_generic", report.freq_rank_b()},
                          {"columns_full_schmidt_rank", report.freq_schmidt()},
                          {"witness_found", report.freq_witness()}};
  Json samples = Json::array();
  for (const auto& rec : report.samples) {
    samples.push_back(Json{{"index", rec.index},
                           {"r", rec.r},
                           {"r_B", rec.r_b},
                           {"column_schmidt_ranks", rec.column_schmidt_ranks},
                           {"rank_AB_generic", rec.rank_ab_generic},
                           {"rank_B_generic", rec.rank_b_generic},
                           {"columns_full_schmidt_rank", rec.columns_full_schmidt},
                           {"witness_found", rec.witness_found},
                           {"witness_trials", rec.witness_trials},
                           {"ab_min_retained", rec.ab_min_retained},
                           {"ab_max_discarded", rec.ab_max_discarded},
                           {"b_min_retained", rec.b_min_retained},
                           {"b_max_discarded", rec.b_max_discarded}});
  }
  j["samples"] = std::move(samples);
  return j;
}

std::string dump(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

std::string ensemble_csv(const EnsembleReport& report) {
  std::ostringstream os;
  os << "index,r,r_B,column_schmidt_ranks,rank_AB_generic,rank_B_generic,"
        "columns_full_schmidt_rank,witness_found,witness_trials,ab_min_retained,"
        "ab_max_discarded,b_min_retained,b_max_discarded\n";
  for (const auto& s : report.samples) {
    os << s.index << ',' << s.r << ',' << s.r_b << ',';
    for (std::size_t k = 0; k < s.column_schmidt_ranks.size(); ++k) {
      os << (k ? ";" : "") << s.column_schmidt_ranks[k];
    }
    os << ',' << s.rank_ab_generic << ',' << s.rank_b_generic << ',' << s.columns_full_schmidt
       << ',' << s.witness_found << ',' << s.witness_trials << ','
       << format_double(s.ab_min_retained) << ',' << format_double(s.ab_max_discarded) << ','
       << format_double(s.b_min_retained) << ',' << format_double(s.b_max_discarded) << '\n';
  }
  return os.str();
}

std::string flatten(const Json& j, bool csv) {
  std::ostringstream os;
  if (csv) os << "key,value\n";
  flatten_into(j, "", csv, os);
  return os.str();
}

}  // namespace undistill::io
