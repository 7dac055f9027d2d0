// shiftlab: classify weighted-shift weight sequences, apply sequence
// transforms, verify the built-in claims registry, and export exact tables.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shiftlab/claims.hpp"
#include "shiftlab/classifiers.hpp"
#include "shiftlab/errors.hpp"
#include "shiftlab/hankel.hpp"
#include "shiftlab/measures.hpp"
#include "shiftlab/moments.hpp"
#include "shiftlab/report.hpp"
#include "shiftlab/transforms.hpp"

namespace sl = shiftlab;

namespace {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sl::ParseError("cannot open file", path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw sl::ParseError(std::string("invalid JSON: ") + e.what(), path);
  }
  return j;
}

void write_output(const nlohmann::json& j, const std::string& json_out) {
  if (json_out.empty()) return;
  std::ofstream out(json_out);
  if (!out) throw sl::ParseError("cannot open output file", json_out);
  out << j.dump(2) << "\n";
}

struct AnalyzeFlags {
  std::string spec_path;
  std::string tests = "ca";
  long K = -1;
  long N = -1;
  long max_bits = -1;
  std::string json_out;
  std::string config_path;
  bool strict = false;
};

void add_analyze_flags(CLI::App* cmd, AnalyzeFlags& f, bool with_spec = true) {
  if (with_spec)
    cmd->add_option("spec", f.spec_path, "sequence spec JSON file")->required();
  cmd->add_option("--tests", f.tests,
                  "comma list: cm, ca, log-ca, mid, contractive(n), "
                  "bram-halmos, hyperexpansive, order");
  cmd->add_option("--K", f.K, "maximum difference order");
  cmd->add_option("--N", f.N, "index window");
  cmd->add_option("--max-bits", f.max_bits, "precision cap in bits");
  cmd->add_option("--json-out", f.json_out, "write the JSON report here");
  cmd->add_option("--config", f.config_path, "config JSON file");
  cmd->add_flag("--strict", f.strict, "exit 3 when any verdict is undecided");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "contractive", "contractive(3)", "contractive=3"
bool parse_contractive(const std::string& token, long& order) {
  if (token.rfind("contractive", 0) != 0) return false;
  std::string rest = token.substr(11);
  if (rest.empty()) {
    order = 1;
    return true;
  }
  if (rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
  else if (rest.front() == '=') rest = rest.substr(1);
  else return false;
  order = std::stol(rest);
  return true;
}

int run_analysis(const sl::SequenceDef& seq, const nlohmann::json& echo,
                 const AnalyzeFlags& flags) {
  sl::Config cfg = sl::Config::load(
      flags.config_path.empty() ? std::nullopt
                                : std::optional<std::string>(flags.config_path));
  if (flags.max_bits > 0) {
    cfg.max_bits = flags.max_bits;
    if (cfg.start_bits > cfg.max_bits) cfg.start_bits = cfg.max_bits;
  }
  const long K = flags.K > 0 ? flags.K : cfg.default_K;
  const long N = flags.N >= 0 ? flags.N : cfg.default_N;

  sl::EvalStats stats;
  sl::EvalOptions opt = sl::EvalOptions::from_config(cfg);
  opt.stats = &stats;

  sl::Report report;
  report.input_echo = echo;
  report.sequence = seq.describe();

  const auto t0 = std::chrono::steady_clock::now();
  bool any_undecided = false;

  for (const std::string& token : split_csv(flags.tests)) {
    nlohmann::json entry;
    try {
      long contractive_order = 0;
      if (token == "ca") {
        entry = sl::completely_alternating_verdict(seq, K, N, opt).to_json();
      } else if (token == "cm") {
        entry = sl::completely_monotone_verdict(seq, K, N, opt).to_json();
      } else if (token == "log-ca") {
        entry = sl::log_completely_alternating_verdict(seq, K, N, opt).to_json();
      } else if (token == "mid") {
        entry = sl::mid_verdict(seq, K, N, opt).to_json();
      } else if (token == "hyperexpansive") {
        entry = sl::hyperexpansive_verdict(seq, K, N, opt).to_json();
      } else if (token == "bram-halmos") {
        entry = sl::bram_halmos_verdict(seq, N, std::min(K, cfg.hankel_cap),
                                        cfg.hankel_cap, opt)
                    .to_json();
      } else if (token == "order") {
        entry = sl::alternating_order(seq, K, N, cfg.witness_window_cap, opt)
                    .to_json();
      } else if (parse_contractive(token, contractive_order)) {
        entry = sl::n_contractive_verdict(seq, contractive_order, N, opt).to_json();
      } else {
        throw sl::DomainError("unknown test \"" + token + "\"");
      }
    } catch (const sl::Error& e) {
      entry = nlohmann::json{{"error", e.what()}};
    }
    if (entry.contains("status") && entry["status"] == "undecided")
      any_undecided = true;
    report.results[token] = std::move(entry);
  }

  const auto t1 = std::chrono::steady_clock::now();
  report.elapsed_ms =
      std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
  report.max_bits_used = stats.max_bits_used.load();
  report.undecided_cells = stats.undecided_cells.load();

  const nlohmann::json out = report.to_json();
  write_output(out, flags.json_out);

  std::cout << "sequence: " << report.sequence << "\n";
  for (const auto& [name, entry] : report.results.items()) {
    std::cout << "  " << name << ": ";
    if (entry.contains("error"))
      std::cout << "error: " << entry["error"].get<std::string>();
    else if (entry.contains("status"))
      std::cout << entry["status"].get<std::string>();
    else if (entry.contains("decided"))
      std::cout << (entry["decided"].get<bool>()
                        ? "order " + std::to_string(entry["max_alternating_order"].get<long>())
                        : "undecided");
    if (entry.contains("witness"))
      std::cout << " (witness k=" << entry["witness"]["k"]
                << ", n=" << entry["witness"]["n"] << ")";
    if (entry.contains("failure_witness"))
      std::cout << " (violation at k=" << entry["failure_witness"]["k"]
                << ", n=" << entry["failure_witness"]["n"] << ")";
    std::cout << "\n";
  }
  if (flags.strict && any_undecided) return 3;
  return 0;
}

sl::TransformTag parse_transform_token(const std::string& token) {
  std::string name = token;
  std::string params;
  const auto colon = token.find(':');
  if (colon != std::string::npos) {
    name = token.substr(0, colon);
    params = token.substr(colon + 1);
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    for (const std::string& kv : split_csv(params)) {
      const auto eq = kv.find('=');
      if (eq != std::string::npos && kv.substr(0, eq) == key)
        return kv.substr(eq + 1);
    }
    return std::nullopt;
  };
  auto need = [&](const std::string& key) {
    auto v = get(key);
    if (!v)
      throw sl::ParseError("transform \"" + name + "\" needs parameter " + key,
                           token);
    return *v;
  };
  if (name == "schur_power") return sl::SchurPowerTag{sl::Rational::from_string(need("p"))};
  if (name == "aluthge") return sl::AluthgeTag{};
  if (name == "aluthge_iter") return sl::AluthgeIterTag{std::stol(need("m"))};
  if (name == "generalized_mean")
    return sl::GeneralizedMeanTag{sl::Rational::from_string(need("t"))};
  if (name == "cesaro") return sl::CesaroTag{};
  if (name == "geometric_cesaro") return sl::GeometricCesaroTag{};
  if (name == "cesaro_window") return sl::CesaroWindowTag{std::stol(need("k"))};
  if (name == "geometric_cesaro_window")
    return sl::GeometricCesaroWindowTag{std::stol(need("k"))};
  if (name == "reciprocal") return sl::ReciprocalTag{};
  if (name == "restriction") return sl::RestrictionTag{std::stol(need("r"))};
  if (name == "perturb_zeroth") {
    sl::PerturbZerothTag t{sl::Rational::from_string(need("alpha0"))};
    if (auto ai = get("allow_increase")) t.allow_increase = (*ai == "true" || *ai == "1");
    return t;
  }
  if (name == "exp_normalized") return sl::ExpNormalizedTag{};
  if (name == "exp_moment") return sl::ExpMomentTag{};
  throw sl::ParseError("unknown transform \"" + name + "\"", token);
}

int cmd_verify_claims(const std::vector<std::string>& ids, bool all, bool list,
                      const std::string& json_out, const std::string& config_path) {
  sl::Config cfg = sl::Config::load(
      config_path.empty() ? std::nullopt : std::optional<std::string>(config_path));
  if (list) {
    for (const auto& rec : sl::claims_registry())
      std::cout << rec.id << (rec.evidence_only ? " [evidence]" : "") << "\n    "
                << rec.description << "\n";
    return 0;
  }
  if (!all && ids.empty())
    throw sl::DomainError("pass claim ids or --all (use --list to see them)");

  const auto results =
      sl::run_claims(all ? std::vector<std::string>{} : ids, cfg, true);

  nlohmann::json jr = nlohmann::json::array();
  bool mismatch = false;
  for (const auto& r : results) {
    jr.push_back(r.to_json());
    std::string status;
    if (r.evidence_only)
      status = "evidence";
    else if (r.matched.value_or(false))
      status = "ok";
    else {
      status = "MISMATCH";
      mismatch = true;
    }
    std::cout << r.id << ": " << status << "\n    expected: " << r.expected
              << "\n    observed: " << r.observed << "\n";
  }
  write_output(nlohmann::json{{"version", sl::kToolVersion}, {"claims", jr}},
               json_out);
  return mismatch ? 2 : 0;
}

int cmd_export(const std::string& spec_path, const std::string& what, long K,
               long N, long hn, long hk, const std::string& format,
               const std::string& out_path, const std::string& config_path) {
  sl::Config cfg = sl::Config::load(
      config_path.empty() ? std::nullopt : std::optional<std::string>(config_path));
  const nlohmann::json spec = load_json_file(spec_path);
  const sl::SequenceDef seq = sl::SequenceDef::from_json(spec);
  sl::EvalOptions opt = sl::EvalOptions::from_config(cfg);

  std::string text;
  nlohmann::json j;
  if (what == "diff-table") {
    const long useK = K > 0 ? K : 2;
    const long useN = N >= 0 ? N : 2;
    const sl::DifferenceTable t = sl::difference_table(seq, useK, useN, opt);
    text = t.to_csv();
    j = t.to_json();
  } else if (what == "moments") {
    const long useN = N >= 0 ? N : cfg.default_N;
    const auto moments = sl::moments_from_weights(seq, useN, opt.start_bits, opt.max_bits);
    std::ostringstream os;
    nlohmann::json arr = nlohmann::json::array();
    for (long n = 0; n <= useN; ++n) {
      os << n << "," << sl::value_to_string(moments[n]) << "\n";
      if (std::holds_alternative<sl::Rational>(moments[n])) {
        arr.push_back(std::get<sl::Rational>(moments[n]).to_string());
      } else {
        const auto [lo, hi] = std::get<sl::Interval>(moments[n]).to_decimal_strings();
        arr.push_back(nlohmann::json{{"lo", lo}, {"hi", hi}});
      }
    }
    text = os.str();
    j = nlohmann::json{{"N", useN}, {"moments", arr}};
  } else if (what == "hankel") {
    sl::MomentSequence ms(seq);
    const sl::HankelMatrix h = sl::hankel_matrix(ms, hn, hk, cfg.hankel_cap);
    text = h.to_csv();
    nlohmann::json rows = nlohmann::json::array();
    for (long i = 0; i < h.size(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (long jj = 0; jj < h.size(); ++jj) row.push_back(h.entry(i, jj).to_string());
      rows.push_back(row);
    }
    j = nlohmann::json{{"n", hn}, {"k", hk}, {"rows", rows}};
  } else {
    throw sl::DomainError("unknown export kind \"" + what +
                          "\"; use diff-table, moments or hankel");
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw sl::ParseError("cannot open output file", out_path);
    out = &file;
  }
  if (format == "csv")
    *out << text;
  else if (format == "json")
    *out << j.dump(2) << "\n";
  else
    throw sl::DomainError("unknown format \"" + format + "\"");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shiftlab: exact classification of weighted-shift weight sequences"};
  app.require_subcommand(1);

  // analyze
  AnalyzeFlags an;
  CLI::App* analyze = app.add_subcommand("analyze", "run classifiers on a sequence");
  add_analyze_flags(analyze, an);

  // transform
  AnalyzeFlags tr;
  std::vector<std::string> chain;
  CLI::App* transform =
      app.add_subcommand("transform", "apply transforms, then analyze");
  add_analyze_flags(transform, tr);
  transform
      ->add_option("--apply", chain,
                   "transform to apply, innermost first; repeatable. "
                   "name[:k=v,...], e.g. schur_power:p=2")
      ->required();

  // verify-claims
  std::vector<std::string> claim_ids;
  bool claims_all = false, claims_list = false;
  std::string claims_json_out, claims_config;
  CLI::App* verify = app.add_subcommand("verify-claims", "run the claims registry");
  verify->add_option("ids", claim_ids, "claim ids to run");
  verify->add_flag("--all", claims_all, "run every claim");
  verify->add_flag("--list", claims_list, "list claim ids and descriptions");
  verify->add_option("--json-out", claims_json_out, "write JSON results here");
  verify->add_option("--config", claims_config, "config JSON file");

  // export
  std::string ex_spec, ex_what, ex_format = "csv", ex_out, ex_config;
  long ex_K = -1, ex_N = -1, ex_n = 0, ex_k = 1;
  CLI::App* exp = app.add_subcommand("export", "export exact tables");
  exp->add_option("spec", ex_spec, "sequence spec JSON file")->required();
  exp->add_option("--what", ex_what, "diff-table | moments | hankel")->required();
  exp->add_option("--K", ex_K, "difference table order");
  exp->add_option("--N", ex_N, "window");
  exp->add_option("--n", ex_n, "hankel base index");
  exp->add_option("--k", ex_k, "hankel order");
  exp->add_option("--format", ex_format, "csv | json");
  exp->add_option("--out", ex_out, "output file (stdout when absent)");
  exp->add_option("--config", ex_config, "config JSON file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      const nlohmann::json spec = load_json_file(an.spec_path);
      return run_analysis(sl::SequenceDef::from_json(spec), spec, an);
    }
    if (transform->parsed()) {
      const nlohmann::json spec = load_json_file(tr.spec_path);
      sl::SequenceDef seq = sl::SequenceDef::from_json(spec);
      nlohmann::json echo{{"base", spec}, {"chain", nlohmann::json::array()}};
      for (const std::string& token : chain) {
        seq = sl::transforms::apply(parse_transform_token(token), seq);
        echo["chain"].push_back(token);
      }
      return run_analysis(seq, echo, tr);
    }
    if (verify->parsed())
      return cmd_verify_claims(claim_ids, claims_all, claims_list,
                               claims_json_out, claims_config);
    if (exp->parsed())
      return cmd_export(ex_spec, ex_what, ex_K, ex_N, ex_n, ex_k, ex_format,
                        ex_out, ex_config);
  } catch (const sl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
