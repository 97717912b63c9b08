// gaussif: command-line front end.
//
//   gaussif pdf      --model m.json --t 0 --y-range=-5:9:0.01 [--out f.csv]
//   gaussif classify --model m.json --t-range=-10:10:0.1
//   gaussif simulate --model m.json --t 0 --n 1000000 [--seed S] [--m PATHS --dt 1e-3]
//   gaussif wigner   --model m.json --t-range=-5.12:5.11:0.01 [--route analytic|sampled]
//   gaussif verify   [--tolerance-scale 1] [--seed S]
//
// Ranges are start:end:step.
// Exit codes: 0 ok, 1 verification failure, 2 usage/config error, 3 numeric/model error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaussif/gaussif.hpp"
#include "gaussif/io/csv.hpp"
#include "gaussif/io/model_json.hpp"
#include "gaussif/verify/acceptance.hpp"

namespace {

using nlohmann::json;
using namespace gaussif;

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr const char* kVersion = "1.0.0";

struct UsageError : Error {
  using Error::Error;
};

struct Range {
  double start = 0.0, end = 0.0, step = 0.0;
};

Range parse_range(const std::string& text, const char* flag) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + " expects start:end:step, got '" + text + "'");
    }
  }
  if (parts.size() != 3) throw UsageError(std::string(flag) + " expects start:end:step, got '" + text + "'");
  Range r{parts[0], parts[1], parts[2]};
  if (!(r.start < r.end)) throw UsageError(std::string(flag) + " needs start < end");
  if (!(r.step > 0.0)) throw UsageError(std::string(flag) + " needs a positive step");
  return r;
}

json range_json(const Range& r) { return {{"start", r.start}, {"end", r.end}, {"step", r.step}}; }

struct Options {
  std::string model_path;
  double t = 0.0;
  std::string t_range, y_range;
  std::size_t n = 100000;
  std::size_t m = 0;
  std::uint64_t seed = verify::kDefaultSeed;
  std::string out;
  std::string format = "csv";
  double dt = 1e-3;
  unsigned threads = 0;
  double tolerance_scale = 1.0;
  std::string route = "analytic";
};

struct Loaded {
  json raw;
  CovarianceModel model;
};

Loaded load_model(const std::string& path) {
  if (path.empty()) throw UsageError("--model <file> is required");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open model file '" + path + "'");
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("model file '" + path + "' is not valid JSON: " + e.what());
  }
  return {raw, io::parse_model(raw)};
}

json base_config(const std::string& command, const Options& o) {
  return {{"command", command}, {"version", kVersion}, {"format", o.format}};
}

json ext_json(const ExtReal& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

json params_json(const IFParams& p) {
  return {{"t", p.t}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"delta", p.delta}};
}

// Output sink: the file named by --out, or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return path_.empty() ? std::cout : file_; }
  bool to_file() const { return !path_.empty(); }

 private:
  std::string path_;
  std::ofstream file_;
};

void write_side_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

// CSV documents start with the config and report as JSON comment lines.
void csv_preamble(std::ostream& os, const json& config, const json& report) {
  io::write_comment(os, "config " + config.dump());
  io::write_comment(os, "report " + report.dump());
}

void echo_report(const Sink& sink, const json& report) {
  if (sink.to_file()) std::cout << report.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

int cmd_pdf(const Options& o) {
  const Loaded ld = load_model(o.model_path);
  const Range yr = parse_range(o.y_range.empty() ? "-10:10:0.01" : o.y_range, "--y-range");
  json config = base_config("pdf", o);
  config["model"] = ld.raw;
  config["t"] = o.t;
  config["y_range"] = range_json(yr);

  const IFParams p = if_params(ld.model, o.t);
  const IFDistribution dist = if_distribution(p);
  json summary = params_json(p);
  summary["regime"] = to_string(dist.regime);
  summary["mean"] = ext_json(dist.center);
  summary["variance"] = to_string(variance_if(p));
  if (dist.regime == Regime::Degenerate) summary["note"] = "point mass at b/a";
  if (dist.regime == Regime::InfiniteIF) summary["note"] = "IF = +inf almost surely";

  std::vector<double> ys;
  if (dist.regime == Regime::HeavyTail) ys = make_grid(yr.start, yr.end, yr.step);

  Sink sink(o.out);
  if (o.format == "json") {
    json rows = json::array();
    for (double y : ys) rows.push_back({y, pdf(p, y), cdf(p, y)});
    sink.os() << json{{"config", config}, {"summary", summary}, {"columns", {"y", "pdf", "cdf"}}, {"rows", rows}}.dump(2)
              << '\n';
  } else {
    csv_preamble(sink.os(), config, summary);
    if (!ys.empty()) {
      sink.os() << "y,pdf,cdf\n";
      for (double y : ys)
        sink.os() << io::format_double(y) << ',' << io::format_double(pdf(p, y)) << ','
                  << io::format_double(cdf(p, y)) << '\n';
    }
  }
  echo_report(sink, summary);
  return kExitOk;
}

int cmd_classify(const Options& o) {
  const Loaded ld = load_model(o.model_path);
  const Range tr = parse_range(o.t_range.empty() ? "-10:10:0.1" : o.t_range, "--t-range");
  json config = base_config("classify", o);
  config["model"] = ld.raw;
  config["t_range"] = range_json(tr);
  const IFTolerances tol;
  config["tolerances"] = {{"delta_rel", tol.delta_rel}, {"a_rel", tol.a_rel}};

  const auto grid = make_grid(tr.start, tr.end, tr.step);
  const TimePartition part = scan_grid(ld.model, grid, tol);
  json report;
  report["points"] = grid.size();
  report["min_delta"] = part.min_delta;
  report["max_delta"] = part.max_delta;
  report["mixed"] = part.mixed();
  json intervals = json::array();
  for (const auto& iv : part.intervals)
    intervals.push_back({{"start", iv.start}, {"end", iv.end}, {"regime", to_string(iv.regime)}});
  report["intervals"] = intervals;
  if (as_wss(ld.model)) {
    const DichotomyReport d = wss_dichotomy_check(ld.model, grid, tol);
    report["dichotomy"] = {{"verdict", to_string(d.verdict)},
                           {"delta0", d.delta0},
                           {"tolerance", d.tolerance},
                           {"beta", d.beta},
                           {"max_cos_deviation", d.max_cos_deviation},
                           {"infinite_set_empty", d.infinite_set_empty}};
  }

  Sink sink(o.out);
  if (o.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const IFParams& q = part.params[i];
      rows.push_back({grid[i], to_string(part.labels[i]), q.delta, q.a,
                      part.labels[i] == Regime::InfiniteIF ? json("inf") : json(q.b / q.a)});
    }
    sink.os() << json{{"config", config},
                      {"report", report},
                      {"columns", {"t", "regime", "delta", "a", "b_over_a"}},
                      {"rows", rows}}
                     .dump(2)
              << '\n';
  } else {
    csv_preamble(sink.os(), config, report);
    io::write_partition_csv(sink.os(), part);
  }
  echo_report(sink, report);
  return kExitOk;
}

json batch_report(const std::vector<ExtReal>& values, const IFParams& p) {
  json r = params_json(p);
  const Regime regime = classify_regime(p);
  r["regime"] = to_string(regime);
  std::size_t n_inf = 0;
  std::vector<double> finite;
  for (const auto& v : values) {
    if (v.is_infinite())
      ++n_inf;
    else
      finite.push_back(v.value());
  }
  r["n"] = values.size();
  r["n_infinite"] = n_inf;
  if (!finite.empty()) {
    std::vector<double> s = finite;
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    r["median"] = s[s.size() / 2];
  }
  if (regime == Regime::HeavyTail && !finite.empty()) {
    const KsResult ks = ks_distance(finite, [&](double y) { return cdf(p, y); });
    r["ks"] = ks.statistic;
    if (finite.size() >= 100000) {
      const TailFit f = tail_exponent(finite, p.b / p.a);
      r["tail_slope"] = f.slope;
      r["tail_points"] = f.points;
    }
  }
  return r;
}

int cmd_simulate(const Options& o) {
  const Loaded ld = load_model(o.model_path);
  if (o.n == 0) throw UsageError("--n must be positive");
  json config = base_config("simulate", o);
  config["model"] = ld.raw;
  config["t"] = o.t;
  config["seed"] = o.seed;
  config["rng"] = std::string(kRngId);
  const SamplingOptions so{std::size_t{1} << 16, o.threads};

  std::vector<ExtReal> values;
  IFParams p;
  json report;
  if (o.m > 0) {
    const auto* tt = std::get_if<TwoTone>(&ld.model);
    if (!tt) throw UsageError("--m (path simulation) needs a two-tone model");
    if (!(o.dt > 0.0)) throw UsageError("--dt must be positive");
    config["m"] = o.m;
    config["dt"] = o.dt;
    const PathEnsemble e =
        simulate_two_tone(tt->xi, tt->eta, tt->corr, {o.t - o.dt, o.t, o.t + o.dt}, o.m, o.seed, so);
    values.reserve(o.m);
    for (std::size_t r = 0; r < e.m; ++r) values.push_back(path_if(e.path(r), o.dt).values[1]);
    p = if_params(ld.model, o.t);
    report = batch_report(values, p);
    report["source"] = "two-tone paths, central difference over 2 dt";
  } else {
    config["n"] = o.n;
    p = if_params(ld.model, o.t);
    const SampleBatch b = sample_if(p, o.n, o.seed, so);
    values = b.values;
    report = batch_report(values, p);
    report["source"] = "Gaussian draws of (x, ydot, y, xdot)";
  }

  Sink sink(o.out);
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& v : values) rows.push_back(ext_json(v));
    sink.os() << json{{"config", config}, {"report", report}, {"values", rows}}.dump(2) << '\n';
  } else {
    csv_preamble(sink.os(), config, report);
    sink.os() << "index,y\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      sink.os() << i << ',' << io::format_ext(values[i]) << '\n';
  }
  if (sink.to_file()) {
    write_side_file(o.out + ".meta.json", json{{"config", config}}.dump(2) + "\n");
    write_side_file(o.out + ".report.json", json{{"config", config}, {"report", report}}.dump(2) + "\n");
  }
  echo_report(sink, report);
  return kExitOk;
}

int cmd_wigner(const Options& o) {
  const Loaded ld = load_model(o.model_path);
  const Range tr = parse_range(o.t_range.empty() ? "-5.12:5.11:0.01" : o.t_range, "--t-range");
  json config = base_config("wigner", o);
  config["model"] = ld.raw;
  config["t_range"] = range_json(tr);
  const auto grid = make_grid(tr.start, tr.end, tr.step);
  Sink sink(o.out);

  std::optional<SpectralAtomMeasure> atoms;
  if (const auto* tt = std::get_if<TwoTone>(&ld.model)) atoms = two_tone_atoms(*tt);
  if (const auto* at = std::get_if<AtomicSpectral>(&ld.model)) atoms = at->measure;

  json report;
  json moments = json::array();
  if (atoms) {
    config["kind"] = "spectrum";
    std::vector<FreqAtomMeasure> slices;
    for (double t : grid) {
      slices.push_back(wigner_spectrum_atoms(*atoms, t));
      json row = {{"t", t}};
      try {
        row["ratio"] = spectrum_moment_ratio(*atoms, t);
      } catch (const SignalZeroError&) {
        row["ratio"] = "undefined";
      }
      const IFParams p = if_params(ld.model, t);
      row["b_over_a"] = p.a > 0.0 ? json(p.b / p.a) : json("inf");
      moments.push_back(row);
    }
    report["moments"] = moments;
    if (o.format == "json") {
      json rows = json::array();
      for (const auto& s : slices)
        for (const auto& a : s.atoms) rows.push_back({s.t, a.xi, a.weight.real(), a.weight.imag()});
      sink.os() << json{{"config", config}, {"report", report}, {"columns", {"t", "xi", "re_w", "im_w"}}, {"rows", rows}}
                       .dump(2)
                << '\n';
    } else {
      csv_preamble(sink.os(), config, report);
      io::write_freq_atoms_header(sink.os());
      for (const auto& s : slices) io::write_freq_atoms_rows(sink.os(), s);
    }
    echo_report(sink, report);
    return kExitOk;
  }

  const auto* r1 = std::get_if<RankOne>(&ld.model);
  if (!r1) throw UsageError("wigner needs a rank-one (signal) or an atomic / two-tone model");
  if (o.route != "analytic" && o.route != "sampled") throw UsageError("--route is analytic or sampled");
  config["kind"] = "signal";
  config["route"] = o.route;
  const std::size_t n = grid.size();
  const WignerGrid w = o.route == "analytic"
                           ? wigner_distribution(r1->g, tr.start, tr.step, n)
                           : wigner_distribution(SignalGrid::sample(r1->g, tr.start, tr.step, n));
  for (std::size_t i = 0; i < w.times.size(); ++i) {
    const double t = w.times[i];
    json row = {{"t", t}, {"zeroth", w.zeroth[i]}};
    try {
      const WignerMoments m = wigner_moments(w, i);
      row["ratio"] = m.ratio;
      row["well_conditioned"] = m.well_conditioned;
    } catch (const SignalZeroError&) {
      row["ratio"] = "undefined";
      row["well_conditioned"] = false;
    }
    row["if"] = ext_json(deterministic_if(r1->g(t), r1->dg(t)));
    moments.push_back(row);
  }
  report["dxi"] = w.dxi;
  report["max_imag_residue"] = w.max_imag_residue;
  report["moments"] = moments;
  if (o.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < w.times.size(); ++i)
      for (std::size_t j = 0; j < w.freqs.size(); ++j) rows.push_back({w.times[i], w.freqs[j], w.at(i, j)});
    sink.os() << json{{"config", config}, {"report", report}, {"columns", {"t", "xi", "W"}}, {"rows", rows}}.dump(2)
              << '\n';
  } else {
    json brief = report;
    brief.erase("moments");
    csv_preamble(sink.os(), config, brief);
    io::write_wigner_csv(sink.os(), w);
    std::ostringstream table;
    table << "t,zeroth,ratio,if,well_conditioned\n";
    for (const auto& row : moments) {
      auto cell = [](const json& v) {
        return v.is_number() ? io::format_double(v.get<double>()) : v.get<std::string>();
      };
      table << io::format_double(row["t"].get<double>()) << ','
            << io::format_double(row["zeroth"].get<double>()) << ',' << cell(row["ratio"]) << ','
            << cell(row["if"]) << ',' << (row["well_conditioned"].get<bool>() ? 1 : 0) << '\n';
    }
    if (sink.to_file()) {
      std::ostringstream head;
      io::write_comment(head, "config " + config.dump());
      write_side_file(o.out + ".moments.csv", head.str() + table.str());
    } else {
      std::cout << "# moments\n" << table.str();
    }
  }
  echo_report(sink, json{{"dxi", w.dxi}, {"max_imag_residue", w.max_imag_residue}});
  return kExitOk;
}

int cmd_verify(const Options& o) {
  verify::AcceptanceOptions ao;
  ao.tolerance_scale = o.tolerance_scale;
  ao.seed = o.seed;
  ao.threads = o.threads == 0 ? 1 : o.threads;
  if (!(ao.tolerance_scale > 0.0)) throw UsageError("--tolerance-scale must be positive");
  const auto results = verify::run_acceptance(ao);
  std::size_t failed = 0;
  Sink sink(o.out);
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& r : results) {
      rows.push_back({{"id", r.id},
                      {"title", r.title},
                      {"measured", std::isfinite(r.measured) ? json(r.measured) : json("nan")},
                      {"threshold", r.threshold},
                      {"pass", r.pass},
                      {"detail", r.detail}});
      failed += r.pass ? 0 : 1;
    }
    json config = base_config("verify", o);
    config["seed"] = ao.seed;
    config["tolerance_scale"] = ao.tolerance_scale;
    config["threads"] = ao.threads;
    sink.os() << json{{"config", config}, {"results", rows}, {"failed", failed}}.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      sink.os() << verify::format_result(r) << '\n';
      failed += r.pass ? 0 : 1;
    }
    sink.os() << (failed ? "FAILED: " : "PASSED: ") << results.size() - failed << " of " << results.size()
              << " criteria passed\n";
  }
  return failed ? kExitVerify : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instantaneous frequency of Gaussian processes: laws, regimes, Wigner moments"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "output file (default: stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", o.model_path, "model description file (JSON)")->required();
  };
  const std::string seed_help =
      "RNG seed (default " + std::to_string(verify::kDefaultSeed) + ")";

  auto* pdf_cmd = app.add_subcommand("pdf", "IF density and cdf at one time");
  add_model(pdf_cmd);
  pdf_cmd->add_option("--t", o.t, "time (default 0)");
  pdf_cmd->add_option("--y-range", o.y_range, "min:max:step (default -10:10:0.01)");
  add_common(pdf_cmd);

  auto* cls_cmd = app.add_subcommand("classify", "partition a time range into IF regimes");
  add_model(cls_cmd);
  cls_cmd->add_option("--t-range", o.t_range, "start:end:step (default -10:10:0.1)");
  add_common(cls_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo IF samples with KS and tail report");
  add_model(sim_cmd);
  sim_cmd->add_option("--t", o.t, "time (default 0)");
  sim_cmd->add_option("--n", o.n, "number of draws (default 100000)");
  sim_cmd->add_option("--m", o.m, "simulate this many two-tone sample paths instead");
  sim_cmd->add_option("--dt", o.dt, "path time step (default 1e-3)");
  sim_cmd->add_option("--seed", o.seed, seed_help);
  sim_cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores; results do not depend on it");
  add_common(sim_cmd);

  auto* wig_cmd = app.add_subcommand("wigner", "Wigner distribution or Wigner spectrum atoms");
  add_model(wig_cmd);
  wig_cmd->add_option("--t-range", o.t_range, "start:end:step (default -5.12:5.11:0.01)");
  wig_cmd->add_option("--route", o.route, "analytic (half-step evaluation) or sampled");
  add_common(wig_cmd);

  auto* ver_cmd = app.add_subcommand("verify", "run the acceptance suite");
  ver_cmd->add_option("--tolerance-scale", o.tolerance_scale, "multiply every threshold (default 1)");
  ver_cmd->add_option("--seed", o.seed, seed_help);
  ver_cmd->add_option("--threads", o.threads, "worker threads (default 1)");
  add_common(ver_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*pdf_cmd) return cmd_pdf(o);
    if (*cls_cmd) return cmd_classify(o);
    if (*sim_cmd) return cmd_simulate(o);
    if (*wig_cmd) return cmd_wigner(o);
    if (*ver_cmd) return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
