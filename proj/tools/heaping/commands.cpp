#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "heaping/anomaly.hpp"
#include "heaping/cli.hpp"
#include "heaping/decomposition.hpp"
#include "heaping/errors.hpp"
#include "heaping/ingest.hpp"
#include "heaping/output.hpp"
#include "heaping/parallel.hpp"
#include "heaping/shape.hpp"
#include "heaping/spectral.hpp"
#include "heaping/stats.hpp"
#include "heaping/svg.hpp"
#include "heaping/synth.hpp"

namespace heaping::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.3.0";

struct Options {
  std::vector<std::string> inputs;
  std::string profile = "canonical";
  std::string profile_file;
  std::vector<std::string> models{"binomial"};
  std::uint64_t iterations = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::vector<double> windows{0.05};
  std::string levels = "0.5,99.5";
  std::string exclude_regions;
  std::string restrict_regions;
  double bins = 0.1;
  bool jitter = false;
  std::string format = "csv,json";
  std::string out;
  Count min_registered = 100;
  double max_percent = 99.0;
  bool refilter = false;
  bool quiet = false;

  bool average = false;
  std::string metric = "both";
  std::size_t exclude_top = 0;
  bool weighted_correlation = false;
  std::string subtotals;

  std::size_t stations = 0;
  std::string size = "lognormal:800,0.5";
  std::string turnout = "beta:6,3";
  std::string result = "beta:6,4";
  std::size_t regions = 10;
  double ballot_loss = 0.002;
  std::string label = "synthetic";
  std::string fraud = "none";
  double fraud_fraction = 0.0;
  std::string target_side = "just_above";
  std::string fraud_metric = "either";
  std::string fraud_regions;
  double max_shift = 5.0;
  bool allow_round_counts = false;
};

struct Formats {
  bool csv = false;
  bool json = false;
  bool svg = false;
};

Formats parse_formats(const std::string& text) {
  Formats f;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") f.csv = true;
    else if (item == "json") f.json = true;
    else if (item == "svg") f.svg = true;
    else if (!item.empty()) throw ParameterError("unknown output format '" + item + "' (csv, json, svg)");
  }
  return f;
}

class Progress {
 public:
  Progress(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {}
  void operator()(const std::string& message) const {
    if (!quiet_) err_ << "heaping: " << message << '\n';
  }
  void warn(const std::string& message) const { err_ << "heaping: warning: " << message << '\n'; }

 private:
  std::ostream& err_;
  bool quiet_;
};

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParameterError(std::string("cannot read ") + what + " from '" + text + "'");
    }
  }
  return out;
}

PercentileLevels parse_levels(const std::string& text) {
  const auto v = parse_numbers(text, "--levels");
  if (v.size() != 2) throw ParameterError("--levels takes two percentages, e.g. 0.5,99.5");
  PercentileLevels levels{v[0] / 100.0, v[1] / 100.0};
  levels.validate();
  return levels;
}

std::set<std::string> parse_region_list(const std::string& spec) {
  std::set<std::string> codes;
  std::string text = spec;
  if (!spec.empty() && spec.front() == '@') {
    std::ifstream in(spec.substr(1), std::ios::binary);
    if (!in) throw IoError("cannot read region list " + spec.substr(1));
    std::string line;
    text.clear();
    while (std::getline(in, line)) {
      if (!line.empty() && line.front() == '#') continue;
      text += line + ',';
    }
  }
  std::string token;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      if (!token.empty()) codes.insert(token);
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) codes.insert(token);
  return codes;
}

std::vector<Metric> parse_metrics(const std::string& text) {
  if (text == "turnout") return {Metric::turnout};
  if (text == "result") return {Metric::result};
  if (text == "both") return {Metric::turnout, Metric::result};
  throw ParameterError("--metric must be turnout, result or both");
}

Percent bin_width(const Options& o) {
  if (!(o.bins > 0.0)) throw ParameterError("--bins must be positive");
  return Percent::from_double(o.bins);
}

std::vector<Percent> window_list(const Options& o) {
  if (o.windows.empty()) throw ParameterError("at least one --window is required");
  std::vector<Percent> out;
  for (double w : o.windows) {
    WindowSpec spec{CenterKind::integer, Percent::from_double(w)};
    spec.validate();
    out.push_back(spec.half_width);
  }
  return out;
}

json common_config(const Options& o) {
  json c;
  c["profile"] = o.profile_file.empty() ? o.profile : "file:" + std::filesystem::path(o.profile_file).filename().string();
  c["min_registered"] = o.min_registered;
  c["max_percent"] = o.max_percent;
  c["exclude_regions"] = o.exclude_regions.empty() ? json() : json(parse_region_list(o.exclude_regions));
  c["restrict_regions"] = o.restrict_regions.empty() ? json() : json(parse_region_list(o.restrict_regions));
  c["version"] = kVersion;
  return c;
}

json mc_config(const Options& o) {
  json c = common_config(o);
  c["models"] = o.models;
  c["iterations"] = o.iterations;
  c["seed"] = o.seed;
  c["levels"] = o.levels;
  c["refilter_simulated"] = o.refilter;
  return c;
}

json histogram_config(const Options& o) {
  json c = mc_config(o);
  c["bins"] = o.bins;
  c["jitter"] = o.jitter;
  c["metric"] = o.metric;
  c["average"] = o.average;
  return c;
}

struct Inputs {
  std::vector<ElectionDataset> datasets;
  std::vector<InputFile> files;
};

CountryProfile resolve_profile(const Options& o) {
  return o.profile_file.empty() ? builtin_profile(o.profile) : load_profile_file(o.profile_file);
}

FilterPolicy policy_of(const Options& o) {
  FilterPolicy p;
  if (o.min_registered < 1) throw ParameterError("--min-registered must be at least 1");
  p.min_registered = o.min_registered;
  if (!(o.max_percent > 0.0 && o.max_percent <= 100.0)) throw ParameterError("--max-percent must lie in (0, 100]");
  p.max_percentage = Percent::from_double(o.max_percent);
  return p;
}

Inputs load_inputs(const Options& o, const Progress& log) {
  if (o.inputs.empty()) throw ParameterError("at least one --input is required");
  if (!o.exclude_regions.empty() && !o.restrict_regions.empty()) {
    throw ParameterError("--exclude-regions and --restrict-regions are mutually exclusive");
  }
  const CountryProfile profile = resolve_profile(o);
  const FilterPolicy policy = policy_of(o);
  std::optional<std::set<std::string>> regions;
  RegionMode mode = RegionMode::exclude;
  if (!o.exclude_regions.empty()) regions = parse_region_list(o.exclude_regions);
  if (!o.restrict_regions.empty()) regions = parse_region_list(o.restrict_regions), mode = RegionMode::restrict_to;

  Inputs in;
  std::set<std::string> labels;
  for (const auto& path : o.inputs) {
    in.files.push_back(describe_input(path));
    auto loaded = load_dataset(path, profile);
    if (!labels.insert(loaded.dataset.label()).second) {
      throw ParameterError("two inputs share the label '" + loaded.dataset.label() + "'");
    }
    if (loaded.report.invalid > 0) {
      log.warn(path + ": " + std::to_string(loaded.report.invalid) + " invalid rows skipped");
    }
    ElectionDataset ds = apply_filters(loaded.dataset, policy);
    log(loaded.dataset.label() + ": " + std::to_string(loaded.dataset.size()) + " stations, " +
        std::to_string(ds.size()) + " after filters");
    if (regions) {
      auto sel = exclude_regions(ds, *regions, mode);
      for (const auto& code : sel.unknown_codes) log.warn(ds.label() + ": region '" + code + "' not in data");
      ds = std::move(sel.dataset);
      log(ds.label() + ": " + std::to_string(ds.size()) + " stations after region selection");
    }
    in.datasets.push_back(std::move(ds));
  }
  return in;
}

json report_json(const AnomalyReport& r) {
  return {{"statistic", r.statistic},
          {"centers", std::string(to_string(r.window.centers))},
          {"half_width", r.window.half_width.to_double()},
          {"model", r.model},
          {"iterations", r.iterations},
          {"stations", r.stations},
          {"empirical", r.empirical},
          {"mc_mean", r.mc_mean},
          {"mc_sd", r.mc_sd},
          {"mc_min", r.mc_min},
          {"mc_median", r.mc_median},
          {"mc_max", r.mc_max},
          {"levels", {r.levels.low, r.levels.high}},
          {"percentile_low", r.percentile_low},
          {"percentile_high", r.percentile_high},
          {"z_score", r.z_score ? json(*r.z_score) : json()},
          {"anomaly_size", r.anomaly_size},
          {"p_value", r.p_value},
          {"p_value_is_bound", r.p_value_is_bound}};
}

NullRunOptions null_options(const Options& o) {
  NullRunOptions n;
  n.workers = o.workers;
  n.levels = parse_levels(o.levels);
  n.refilter_simulated = o.refilter;
  n.refilter_policy = policy_of(o);
  return n;
}

void check_iterations(const Options& o) {
  if (o.iterations < kMinIterations) {
    throw ParameterError("--iterations must be at least " + std::to_string(kMinIterations));
  }
}

void print_summary(std::ostream& out, const RunInfo& run, const OutputSet& outputs, json extra = json::object()) {
  json j = {{"config_hash", run.hash()}, {"seed", run.seed()}, {"outputs", outputs.names()}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  out << j.dump() << '\n';
}

std::string csv_z(const std::optional<double>& z) { return z ? num(*z) : std::string(); }

// ---------------------------------------------------------------- validate

int cmd_validate(const Options& o, std::ostream& out, const Progress& log) {
  if (o.inputs.empty()) throw ParameterError("at least one --input is required");
  const CountryProfile profile = resolve_profile(o);
  std::vector<InputFile> files;
  for (const auto& p : o.inputs) files.push_back(describe_input(p));
  if (!o.subtotals.empty()) files.push_back(describe_input(o.subtotals));
  json config = common_config(o);
  config["subtotals"] = !o.subtotals.empty();
  const RunInfo run("validate", config, files, 0);

  std::optional<std::map<std::string, StationCounts>> reference;
  if (!o.subtotals.empty()) reference = load_subtotals(o.subtotals);
  json reports = json::array();
  for (const auto& p : o.inputs) {
    const auto loaded = load_dataset(p, profile);
    json r = json::parse(loaded.report.to_json());
    log(loaded.dataset.label() + ": parsed " + std::to_string(loaded.report.parsed) + ", invalid " +
        std::to_string(loaded.report.invalid));
    if (reference) {
      const auto check = verify_subtotals(loaded.dataset, *reference);
      r["subtotals"] = json::parse(check.to_json());
      if (!check.ok()) {
        log.warn(loaded.dataset.label() + ": " + std::to_string(check.discrepancies.size()) +
                 " subtotal discrepancies, " + std::to_string(check.unmatched.size()) + " unmatched regions");
      }
    }
    reports.push_back(r);
  }
  const json doc = {{"run", run.to_json()}, {"reports", reports}};
  if (!o.out.empty()) {
    OutputSet outputs(o.out);
    outputs.write("validate.json", doc.dump(2) + "\n");
    outputs.commit();
  }
  out << doc.dump(2) << '\n';
  return 0;
}

// ----------------------------------------------------------------- analyze

std::vector<StatisticRequest> analyze_requests(const std::vector<Percent>& windows) {
  const WindowSpec w{CenterKind::integer, windows.front()};
  const WindowSpec h{CenterKind::half_integer, windows.front()};
  constexpr auto both = MetricScope::turnout_or_result;
  constexpr auto t = MetricScope::turnout_only;
  constexpr auto r = MetricScope::result_only;
  constexpr auto count = Weighting::station_count;
  constexpr auto voters = Weighting::registered_voters;
  std::vector<StatisticRequest> req = {
      {{both, count, false}, w},  {{t, count, false}, w},  {{r, count, false}, w},  {{t, voters, false}, w},
      {{r, voters, false}, w},    {{t, count, true}, w},   {{r, count, true}, w},   {{both, count, false}, h},
      {{t, count, false}, h},     {{r, count, false}, h},
  };
  for (std::size_t i = 1; i < windows.size(); ++i) req.push_back({{}, {CenterKind::integer, windows[i]}});
  return req;
}
constexpr std::size_t kFixedRequests = 10;

int cmd_analyze(const Options& o, std::ostream& out, const Progress& log) {
  check_iterations(o);
  const Formats fmt = parse_formats(o.format);
  const auto windows = window_list(o);
  const auto requests = analyze_requests(windows);
  json config = mc_config(o);
  config["windows"] = o.windows;
  std::vector<NullModel> models;
  for (const auto& m : o.models) models.push_back(NullModel::parse(m));

  const Inputs in = load_inputs(o, log);
  const RunInfo run("analyze", config, in.files, o.seed);
  const NullRunOptions nopt = null_options(o);

  Csv box(run), samples(run), sweep(run);
  box.header({"label", "model", "statistic", "centers", "half_width", "stations", "empirical", "mc_mean", "mc_sd",
              "mc_min", "percentile_low", "mc_median", "percentile_high", "mc_max", "z_score", "anomaly_size",
              "p_value", "p_value_is_bound"});
  samples.header({"label", "model", "statistic", "centers", "half_width", "iteration", "value"});
  sweep.header({"label", "model", "half_width", "empirical", "mc_mean", "mc_sd", "z_score", "anomaly_size"});
  json results = json::array();
  std::vector<std::string> svgs;
  std::vector<std::pair<std::string, std::string>> svg_files;

  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    std::vector<svg::BoxItem> items;
    std::vector<svg::Series> z_lines;
    for (std::size_t di = 0; di < in.datasets.size(); ++di) {
      const auto& ds = in.datasets[di];
      log("analyze " + ds.label() + " with " + models[mi].to_string() + ", " + std::to_string(o.iterations) +
          " iterations");
      const auto reports = run_null(ds, requests, models[mi], o.iterations, o.seed, nopt);
      json rj = json::array();
      for (std::size_t ri = 0; ri < reports.size(); ++ri) {
        const auto& r = reports[ri];
        if (ri < kFixedRequests) rj.push_back(report_json(r));
        const std::string hw = num(r.window.half_width.to_double());
        const std::string centers(to_string(r.window.centers));
        if (ri < kFixedRequests) {
          box.cell(ds.label()).cell(r.model).cell(r.statistic).cell(centers).cell(hw).cell(std::uint64_t{r.stations})
              .cell(r.empirical).cell(r.mc_mean).cell(r.mc_sd).cell(r.mc_min).cell(r.percentile_low)
              .cell(r.mc_median).cell(r.percentile_high).cell(r.mc_max).cell(csv_z(r.z_score))
              .cell(r.anomaly_size).cell(r.p_value).cell(r.p_value_is_bound ? "true" : "false");
          box.end();
          for (std::size_t it = 0; it < r.mc_samples.size(); ++it) {
            samples.cell(ds.label()).cell(r.model).cell(r.statistic).cell(centers).cell(hw)
                .cell(std::uint64_t{it}).cell(r.mc_samples[it]);
            samples.end();
          }
        }
      }
      json sweep_json = json::array();
      svg::Series zs{ds.label(), {}, {}, svg::color(di)};
      for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        const auto& r = reports[wi == 0 ? 0 : kFixedRequests + wi - 1];
        sweep.cell(ds.label()).cell(r.model).cell(r.window.half_width.to_double()).cell(r.empirical)
            .cell(r.mc_mean).cell(r.mc_sd).cell(csv_z(r.z_score)).cell(r.anomaly_size);
        sweep.end();
        sweep_json.push_back(report_json(r));
        zs.x.push_back(r.window.half_width.to_double());
        zs.y.push_back(r.z_score ? *r.z_score : std::nan(""));
      }
      z_lines.push_back(std::move(zs));
      const auto& main = reports.front();
      items.push_back({ds.label(), main.mc_min, main.percentile_low, main.mc_median, main.percentile_high,
                       main.mc_max, main.empirical});
      std::map<std::string, std::size_t> excluded;
      for (const auto& e : ds.filter_log()) ++excluded[std::string(to_string(e.reason))];
      results.push_back({{"label", ds.label()},
                         {"model", models[mi].to_string()},
                         {"stations", ds.size()},
                         {"excluded", excluded},
                         {"reports", rj},
                         {"window_sweep", sweep_json}});
    }
    const std::string tag = file_token(models[mi].to_string());
    if (fmt.svg) {
      svg_files.emplace_back("analyze_boxplot_" + tag + ".svg",
                             svg::render_boxplot("Integer stations vs. " + models[mi].to_string() + " null",
                                                 "stations", items, run));
      if (windows.size() > 1) {
        svg::LineChart chart{"z-score by window half-width", "half-width (%)", "z", {}, z_lines, z_lines};
        svg_files.emplace_back("analyze_zsweep_" + tag + ".svg", svg::render(chart, run));
      }
    }
  }

  OutputSet outputs(o.out);
  if (fmt.json) outputs.write("analyze.json", json{{"run", run.to_json()}, {"results", results}}.dump(2) + "\n");
  if (fmt.csv) {
    outputs.write("boxplot.csv", box.text());
    outputs.write("samples.csv", samples.text());
    outputs.write("window_sweep.csv", sweep.text());
  }
  for (const auto& [name, text] : svg_files) outputs.write(name, text);
  outputs.commit();
  print_summary(out, run, outputs);
  return 0;
}

// --------------------------------------------------------------- histogram

WeightedHistogram scaled(WeightedHistogram h, double factor) {
  for (double& w : h.weights) w *= factor;
  h.suppressed_weight *= factor;
  return h;
}

struct MetricSums {
  std::optional<HistogramEnsemble> mc;  // element-wise sum over inputs
  WeightedHistogram empirical;          // element-wise sum over inputs
};

void add_into(MetricSums& sums, const HistogramEnsemble& ens, const WeightedHistogram& emp) {
  if (!sums.mc) {
    sums.mc.emplace(ens.metric(), ens.bin_width(), ens.iterations());
    sums.empirical = emp;
    std::fill(sums.empirical.weights.begin(), sums.empirical.weights.end(), 0.0);
    sums.empirical.suppressed_weight = 0.0;
  }
  for (std::size_t it = 0; it < ens.iterations(); ++it) {
    auto dst = sums.mc->row(it);
    const auto src = ens.row(it);
    for (std::size_t b = 0; b < dst.size(); ++b) dst[b] += src[b];
  }
  for (std::size_t b = 0; b < emp.size(); ++b) sums.empirical.weights[b] += emp.weights[b];
  sums.empirical.suppressed_weight += emp.suppressed_weight;
}

HistogramOptions histogram_options(const Options& o) {
  HistogramOptions h;
  h.bin_width = bin_width(o);
  h.jitter = o.jitter;
  h.jitter_seed = o.seed;
  h.validate();
  return h;
}

int cmd_histogram(const Options& o, std::ostream& out, const Progress& log) {
  check_iterations(o);
  const Formats fmt = parse_formats(o.format);
  const auto metrics = parse_metrics(o.metric);
  const HistogramOptions hopt = histogram_options(o);
  const PercentileLevels levels = parse_levels(o.levels);
  const NullModel model = NullModel::parse(o.models.front());
  const Inputs in = load_inputs(o, log);
  const RunInfo run("histogram", histogram_config(o), in.files, o.seed);

  std::vector<std::pair<std::string, std::string>> files;
  std::vector<WeightedHistogram> peak_emp, peak_mc;
  json summary = json::array();
  auto emit = [&](const std::string& label, const WeightedHistogram& emp, const Envelope& env,
                  const WeightedHistogram& mean) {
    const std::string metric(to_string(emp.metric));
    Csv csv(run);
    csv.header({"bin_center", "empirical", "mc_mean", "mc_low", "mc_high"});
    std::vector<double> x(emp.size());
    for (std::size_t b = 0; b < emp.size(); ++b) {
      x[b] = emp.center(b);
      csv.cell(x[b]).cell(emp.weights[b]).cell(mean.weights[b]).cell(env.low[b]).cell(env.high[b]);
      csv.end();
    }
    const std::string stem = "histogram_" + file_token(label) + "_" + metric;
    if (fmt.csv) files.emplace_back(stem + ".csv", csv.text());
    if (fmt.svg) {
      svg::LineChart chart{label + " " + metric + " histogram", metric + " (%)", "registered voters",
                           {svg::Band{x, env.low, env.high, "#bbbbbb"}},
                           {svg::Series{"empirical", x, emp.weights, "#1f77b4"},
                            svg::Series{"MC mean", x, mean.weights, "#444444"}},
                           {}};
      files.emplace_back(stem + ".svg", svg::render(chart, run));
    }
    summary.push_back({{"label", label}, {"metric", metric}, {"total", emp.total()},
                       {"suppressed_full", emp.suppressed_weight}});
    peak_emp.push_back(emp);
    peak_mc.push_back(mean);
  };

  std::vector<MetricSums> sums(metrics.size());
  for (const auto& ds : in.datasets) {
    log("histogram " + ds.label() + ", " + std::to_string(o.iterations) + " iterations");
    const auto ensembles = simulate_histograms(ds, metrics, model, o.iterations, o.seed, hopt, o.workers);
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
      const auto emp = build_histogram(ds, metrics[mi], hopt);
      if (o.average) {
        add_into(sums[mi], ensembles[mi], emp);
      } else {
        emit(ds.label(), emp, ensembles[mi].envelope(levels), ensembles[mi].mean());
      }
    }
  }
  if (o.average) {
    const double k = 1.0 / static_cast<double>(in.datasets.size());
    for (auto& s : sums) {
      Envelope env = s.mc->envelope(levels);
      for (auto* v : {&env.low, &env.high, &env.mean}) {
        for (double& x : *v) x *= k;
      }
      emit("average", scaled(s.empirical, k), env, scaled(s.mc->mean(), k));
    }
  }

  const PeakShape shape = peak_shape(peak_emp, peak_mc);
  Csv pcsv(run);
  pcsv.header({"offset", "mean_excess"});
  for (std::size_t i = 0; i < shape.offsets.size(); ++i) {
    pcsv.cell(shape.offsets[i]).cell(shape.mean_excess[i]);
    pcsv.end();
  }

  OutputSet outputs(o.out);
  for (const auto& [name, text] : files) outputs.write(name, text);
  if (fmt.csv) outputs.write("peak_shape.csv", pcsv.text());
  if (fmt.svg) {
    svg::LineChart chart{"Average integer peak shape", "offset from integer (%)", "excess registered voters", {},
                         {svg::Series{"", shape.offsets, shape.mean_excess, "#1f77b4"}},
                         {svg::Series{"", shape.offsets, shape.mean_excess, "#1f77b4"}}};
    outputs.write("peak_shape.svg", svg::render(chart, run));
  }
  if (fmt.json) {
    json j = {{"run", run.to_json()},
              {"histograms", summary},
              {"peak_shape",
               {{"offsets", shape.offsets}, {"mean_excess", shape.mean_excess}, {"intervals", shape.intervals}}}};
    outputs.write("histogram.json", j.dump(2) + "\n");
  }
  outputs.commit();
  print_summary(out, run, outputs);
  return 0;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const Options& o, std::ostream& out, const Progress& log) {
  check_iterations(o);
  const Formats fmt = parse_formats(o.format);
  const auto metrics = parse_metrics(o.metric);
  const HistogramOptions hopt = histogram_options(o);
  if (hopt.bin_width != Percent::from_ticks(1000)) throw ParameterError("spectrum needs --bins 0.1");
  const PercentileLevels levels = parse_levels(o.levels);
  const NullModel model = NullModel::parse(o.models.front());
  const Inputs in = load_inputs(o, log);
  const RunInfo run("spectrum", histogram_config(o), in.files, o.seed);

  std::vector<std::pair<std::string, std::string>> files;
  Csv tracks(run), last(run);
  tracks.header({"label", "metric", "center", "harmonic_1"});
  last.header({"label", "metric", "last_window_harmonic_1"});
  std::map<Metric, std::vector<svg::Series>> track_lines;
  json summary = json::array();

  // emp and mc may be sums over several inputs; `scale` turns them into
  // averages. The spectrogram ratio does not depend on the scale.
  auto emit = [&](const std::string& label, const WeightedHistogram& emp, const HistogramEnsemble& mc,
                  double scale) {
    const std::string metric(to_string(emp.metric));
    const auto spectrum = amplitude_spectrum(scaled(emp, scale));
    const std::size_t nf = spectrum.frequencies.size();
    const std::size_t n_it = mc.iterations();
    std::vector<double> amps(n_it * nf);
    parallel_for(n_it, o.workers, [&](std::size_t it) {
      const auto s = amplitude_spectrum(scaled(mc.histogram(it), scale));
      std::copy(s.amplitudes.begin(), s.amplitudes.end(), amps.begin() + static_cast<std::ptrdiff_t>(it * nf));
    });
    std::vector<double> lo(nf), hi(nf), mean(nf), column(n_it);
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t it = 0; it < n_it; ++it) column[it] = amps[it * nf + f];
      std::sort(column.begin(), column.end());
      lo[f] = percentile_sorted(column, levels.low);
      hi[f] = percentile_sorted(column, levels.high);
      mean[f] = heaping::mean(column);
    }
    const std::string stem = file_token(label) + "_" + metric;
    Csv scsv(run);
    scsv.header({"frequency", "amplitude", "mc_mean", "mc_low", "mc_high"});
    for (std::size_t f = 0; f < nf; ++f) {
      scsv.cell(spectrum.frequencies[f]).cell(spectrum.amplitudes[f]).cell(mean[f]).cell(lo[f]).cell(hi[f]);
      scsv.end();
    }

    const Spectrogram sg = spectrogram(emp, mc, o.workers);
    Csv gcsv(run);
    gcsv.header({"center", "frequency", "relative_amplitude"});
    for (std::size_t c = 0; c < sg.centers.size(); ++c) {
      for (std::size_t f = 0; f < sg.frequencies.size(); ++f) {
        gcsv.cell(sg.centers[c]).cell(sg.frequencies[f]).cell(sg.at(c, f));
        gcsv.end();
      }
    }
    const auto track = harmonic_track(sg, 1.0);
    for (std::size_t c = 0; c < track.size(); ++c) {
      tracks.cell(label).cell(metric).cell(sg.centers[c]).cell(track[c]);
      tracks.end();
    }
    const double last_value = last_window_harmonic(sg, 1.0);
    last.cell(label).cell(metric).cell(last_value);
    last.end();
    track_lines[emp.metric].push_back({label, sg.centers, track, svg::color(track_lines[emp.metric].size())});
    summary.push_back({{"label", label},
                       {"metric", metric},
                       {"amplitude_1", spectrum.at(1.0)},
                       {"amplitude_2", spectrum.at(2.0)},
                       {"amplitude_0_2", spectrum.at(0.2)},
                       {"last_window_harmonic_1", std::isnan(last_value) ? json() : json(last_value)}});
    if (fmt.csv) {
      files.emplace_back("spectrum_" + stem + ".csv", scsv.text());
      files.emplace_back("spectrogram_" + stem + ".csv", gcsv.text());
    }
    if (fmt.svg) {
      svg::LineChart chart{label + " " + metric + " amplitude spectrum", "frequency (1/%)", "amplitude",
                           {svg::Band{spectrum.frequencies, lo, hi, "#bbbbbb"}},
                           {svg::Series{"", spectrum.frequencies, spectrum.amplitudes, "#1f77b4"}},
                           {}};
      files.emplace_back("spectrum_" + stem + ".svg", svg::render(chart, run));
      svg::Heatmap map;
      map.title = label + " " + metric + " spectrogram (relative to MC)";
      map.x_label = "window centre (%)";
      map.y_label = "frequency (1/%)";
      map.cols = sg.centers.size();
      map.rows = sg.frequencies.size();
      map.values.resize(map.cols * map.rows);
      for (std::size_t c = 0; c < map.cols; ++c) {
        for (std::size_t f = 0; f < map.rows; ++f) map.values[f * map.cols + c] = sg.at(c, f);
      }
      map.x0 = sg.centers.front();
      map.x1 = sg.centers.back();
      map.y0 = 0.0;
      map.y1 = sg.frequencies.back();
      map.log_scale = true;
      files.emplace_back("spectrogram_" + stem + ".svg", svg::render(map, run));
    }
  };

  std::vector<MetricSums> sums(metrics.size());
  for (const auto& ds : in.datasets) {
    log("spectrum " + ds.label() + ", " + std::to_string(o.iterations) + " iterations");
    const auto ensembles = simulate_histograms(ds, metrics, model, o.iterations, o.seed, hopt, o.workers);
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
      const auto emp = build_histogram(ds, metrics[mi], hopt);
      if (o.average) {
        add_into(sums[mi], ensembles[mi], emp);
      } else {
        emit(ds.label(), emp, ensembles[mi], 1.0);
      }
    }
  }
  if (o.average) {
    for (auto& s : sums) emit("average", s.empirical, *s.mc, 1.0 / static_cast<double>(in.datasets.size()));
  }

  OutputSet outputs(o.out);
  for (const auto& [name, text] : files) outputs.write(name, text);
  if (fmt.csv) {
    outputs.write("harmonic_track.csv", tracks.text());
    outputs.write("last_window.csv", last.text());
  }
  if (fmt.svg) {
    for (const auto& [metric, lines] : track_lines) {
      svg::LineChart chart{"Relative 1/% harmonic, " + std::string(to_string(metric)), "window centre (%)",
                           "relative amplitude", {}, lines, {}};
      outputs.write("harmonic_track_" + std::string(to_string(metric)) + ".svg", svg::render(chart, run));
    }
  }
  if (fmt.json) outputs.write("spectrum.json", json{{"run", run.to_json()}, {"spectra", summary}}.dump(2) + "\n");
  outputs.commit();
  print_summary(out, run, outputs);
  return 0;
}

// ----------------------------------------------------------------- regions

void write_table(Csv& peaks, Csv& ranking, const RegionPeakTable& t) {
  const std::string centers(to_string(t.centers));
  for (const auto& r : t.rows) {
    peaks.cell(centers).cell(r.region).cell(r.year).cell(std::uint64_t{r.stations});
    if (r.amplitude) {
      peaks.cell(*r.amplitude).cell(std::string(to_string(r.location->metric))).cell(r.location->center.to_double());
    } else {
      peaks.cell("").cell("").cell("");
    }
    peaks.end();
  }
  for (std::size_t i = 0; i < t.ranking.size(); ++i) {
    const auto& r = t.ranking[i];
    ranking.cell(centers).cell(std::uint64_t{i + 1}).cell(r.region).cell(r.max_amplitude).cell(r.year)
        .cell(std::string(to_string(r.location.metric))).cell(r.location.center.to_double());
    ranking.end();
  }
}

json table_json(const RegionPeakTable& t) {
  json ranking = json::array();
  for (const auto& r : t.ranking) {
    ranking.push_back({{"region", r.region},
                       {"max_amplitude", r.max_amplitude},
                       {"year", r.year},
                       {"metric", std::string(to_string(r.location.metric))},
                       {"center", r.location.center.to_double()}});
  }
  return {{"centers", std::string(to_string(t.centers))}, {"ranking", ranking}};
}

svg::Heatmap region_map(const RegionPeakTable& t, const std::vector<std::string>& years) {
  svg::Heatmap map;
  map.title = std::string("Largest ") + (t.centers == CenterKind::integer ? "integer" : "half-integer") +
              " peak per region and year";
  map.x_label = "election";
  map.cols = years.size();
  map.rows = t.ranking.size();
  map.values.assign(map.cols * map.rows, std::nan(""));
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < t.ranking.size(); ++i) row_of[t.ranking[i].region] = map.rows - 1 - i;
  map.row_labels.resize(map.rows);
  for (const auto& [region, row] : row_of) map.row_labels[row] = region;
  for (const auto& r : t.rows) {
    const auto col = static_cast<std::size_t>(std::find(years.begin(), years.end(), r.year) - years.begin());
    if (r.amplitude && col < map.cols) map.values[row_of[r.region] * map.cols + col] = std::max(0.0, *r.amplitude);
  }
  map.col_labels = years;
  return map;
}

int cmd_regions(const Options& o, std::ostream& out, const Progress& log) {
  check_iterations(o);
  const Formats fmt = parse_formats(o.format);
  const NullModel model = NullModel::parse(o.models.front());
  const auto windows = window_list(o);
  RegionPeakOptions ropt;
  ropt.workers = o.workers;
  ropt.bin_width = bin_width(o);
  json config = mc_config(o);
  config["bins"] = o.bins;
  config["exclude_top"] = o.exclude_top;
  config["windows"] = o.windows;
  const Inputs in = load_inputs(o, log);
  const RunInfo run("regions", config, in.files, o.seed);

  log("region peaks over " + std::to_string(in.datasets.size()) + " elections");
  const auto integer = region_peaks(in.datasets, model, o.iterations, o.seed, CenterKind::integer, ropt);
  const auto half = region_peaks(in.datasets, model, o.iterations, o.seed, CenterKind::half_integer, ropt);

  Csv peaks(run), ranking(run);
  peaks.header({"centers", "region", "year", "stations", "amplitude", "metric", "center"});
  ranking.header({"centers", "rank", "region", "max_amplitude", "year", "metric", "center"});
  write_table(peaks, ranking, integer);
  write_table(peaks, ranking, half);
  json doc = {{"run", run.to_json()}, {"tables", {table_json(integer), table_json(half)}}};

  std::optional<std::string> top_text, reanalysis_text;
  if (o.exclude_top > 0) {
    const auto top = top_regions(integer, o.exclude_top);
    const std::set<std::string> top_set(top.begin(), top.end());
    doc["top_regions"] = top;
    std::string list = run.csv_comment();
    for (const auto& code : top) list += code + '\n';
    top_text = list;

    Csv re(run);
    re.header({"label", "selection", "stations", "empirical", "mc_mean", "percentile_low", "percentile_high",
               "z_score", "anomaly_size", "p_value"});
    const NullRunOptions nopt = null_options(o);
    const WindowSpec window{CenterKind::integer, windows.front()};
    json rj = json::array();
    for (const auto& ds : in.datasets) {
      for (const auto mode : {RegionMode::exclude, RegionMode::restrict_to}) {
        const char* name = mode == RegionMode::exclude ? "without_top" : "only_top";
        const auto sel = exclude_regions(ds, top_set, mode);
        log("re-analysis " + ds.label() + " " + name + ": " + std::to_string(sel.dataset.size()) + " stations");
        const auto r = run_null(sel.dataset, StatisticDef{}, window, model, o.iterations, o.seed, nopt);
        re.cell(ds.label()).cell(name).cell(std::uint64_t{r.stations}).cell(r.empirical).cell(r.mc_mean)
            .cell(r.percentile_low).cell(r.percentile_high).cell(csv_z(r.z_score)).cell(r.anomaly_size)
            .cell(r.p_value);
        re.end();
        json one = report_json(r);
        one["label"] = ds.label();
        one["selection"] = name;
        rj.push_back(one);
      }
    }
    doc["reanalysis"] = rj;
    reanalysis_text = re.text();
  }

  OutputSet outputs(o.out);
  if (fmt.csv) {
    outputs.write("region_peaks.csv", peaks.text());
    outputs.write("region_ranking.csv", ranking.text());
    if (reanalysis_text) outputs.write("regions_reanalysis.csv", *reanalysis_text);
  }
  if (top_text) outputs.write("top_regions.txt", *top_text);
  if (fmt.json) outputs.write("regions.json", doc.dump(2) + "\n");
  if (fmt.svg) {
    std::vector<std::string> years;
    for (const auto& ds : in.datasets) years.push_back(ds.label());
    outputs.write("region_peaks_integer.svg", svg::render(region_map(integer, years), run));
    outputs.write("region_peaks_half_integer.svg", svg::render(region_map(half, years), run));
  }
  outputs.commit();
  print_summary(out, run, outputs);
  return 0;
}

// ------------------------------------------------------------- fingerprint

int cmd_fingerprint(const Options& o, std::ostream& out, const Progress& log) {
  const Formats fmt = parse_formats(o.format);
  json config = common_config(o);
  config["weighted_correlation"] = o.weighted_correlation;
  const Inputs in = load_inputs(o, log);
  const RunInfo run("fingerprint", config, in.files, 0);
  const FingerprintOptions fopt{o.weighted_correlation};

  std::vector<std::pair<std::string, Fingerprint2D>> prints;
  for (const auto& ds : in.datasets) prints.emplace_back(ds.label(), fingerprint(ds, fopt));
  if (in.datasets.size() > 1) {
    std::vector<StationRecord> all;
    for (const auto& ds : in.datasets) {
      for (auto s : ds.stations()) {
        s.station_id = ds.label() + ":" + s.station_id;
        all.push_back(std::move(s));
      }
    }
    prints.emplace_back("combined", fingerprint(ElectionDataset("combined", std::move(all)), fopt));
  }

  OutputSet outputs(o.out);
  json summary = json::array();
  for (const auto& [label, fp] : prints) {
    log("fingerprint " + label + ": " + std::to_string(fp.stations) + " stations");
    summary.push_back({{"label", label},
                       {"stations", fp.stations},
                       {"total_registered", fp.total()},
                       {"correlation", fp.correlation ? json(*fp.correlation) : json()}});
    const std::string stem = "fingerprint_" + file_token(label);
    if (fmt.csv) {
      Csv csv(run);
      csv.header({"turnout_low", "result_low", "registered"});
      for (std::size_t t = 0; t < Fingerprint2D::kBins; ++t) {
        for (std::size_t r = 0; r < Fingerprint2D::kBins; ++r) {
          if (fp.at(t, r) == 0) continue;
          csv.cell(static_cast<double>(t) * Fingerprint2D::kBinWidth)
              .cell(static_cast<double>(r) * Fingerprint2D::kBinWidth)
              .cell(std::int64_t{fp.at(t, r)});
          csv.end();
        }
      }
      outputs.write(stem + ".csv", csv.text());
    }
    if (fmt.svg) {
      svg::Heatmap map;
      map.title = label + " turnout x result (r = " + (fp.correlation ? num(std::round(*fp.correlation * 1000) / 1000)
                                                                      : std::string("n/a")) + ")";
      map.x_label = "turnout (%)";
      map.y_label = "leader's result (%)";
      map.cols = map.rows = Fingerprint2D::kBins;
      map.values.resize(map.cols * map.rows);
      for (std::size_t t = 0; t < map.cols; ++t) {
        for (std::size_t r = 0; r < map.rows; ++r) map.values[r * map.cols + t] = static_cast<double>(fp.at(t, r));
      }
      map.x0 = map.y0 = 0.0;
      map.x1 = map.y1 = 100.0;
      map.log_scale = true;
      outputs.write(stem + ".svg", svg::render(map, run));
    }
  }
  if (fmt.json) outputs.write("fingerprint.json", json{{"run", run.to_json()}, {"fingerprints", summary}}.dump(2) + "\n");
  outputs.commit();
  print_summary(out, run, outputs);
  return 0;
}

// ---------------------------------------------------------------- simulate

std::pair<std::string, std::vector<double>> parse_spec(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParameterError(std::string("cannot read ") + what + " '" + text + "'");
  return {text.substr(0, colon), parse_numbers(text.substr(colon + 1), what)};
}

SizeDistribution parse_size(const std::string& text) {
  const auto [kind, v] = parse_spec(text, "--size");
  if (kind == "fixed" && v.size() == 1) return FixedSize{static_cast<Count>(std::llround(v[0]))};
  if (kind == "lognormal" && v.size() == 2) return LogNormalSize{v[0], v[1]};
  throw ParameterError("--size is fixed:<V> or lognormal:<median>,<sigma>");
}

ProbabilityField parse_probability(const std::string& text, const char* what) {
  const auto [kind, v] = parse_spec(text, what);
  if (kind == "fixed" && v.size() == 1) return FixedProbability{v[0]};
  if (kind == "beta" && v.size() == 2) return BetaProbability{v[0], v[1]};
  throw ParameterError(std::string(what) + " is fixed:<p> or beta:<a>,<b>");
}

int cmd_simulate(const Options& o, std::ostream& out, const Progress& log) {
  const Formats fmt = parse_formats(o.format);
  GeneratorConfig g;
  g.label = o.label;
  g.n_stations = o.stations;
  g.size = parse_size(o.size);
  g.turnout = parse_probability(o.turnout, "--turnout");
  g.result = parse_probability(o.result, "--result");
  g.regions = o.regions;
  g.ballot_loss = o.ballot_loss;

  std::optional<FraudSpec> fraud;
  if (o.fraud != "none") {
    FraudSpec f;
    f.mechanism = parse_fraud_mechanism(o.fraud);
    f.affected_fraction = o.fraud_fraction;
    if (o.target_side == "just_above") f.target_side = TargetSide::just_above;
    else if (o.target_side == "nearest") f.target_side = TargetSide::nearest;
    else throw ParameterError("--target-side is just_above or nearest");
    if (o.fraud_metric == "turnout") f.metric = FraudMetric::turnout;
    else if (o.fraud_metric == "result") f.metric = FraudMetric::result;
    else if (o.fraud_metric == "either") f.metric = FraudMetric::either;
    else if (o.fraud_metric == "both") f.metric = FraudMetric::both;
    else throw ParameterError("--fraud-metric is turnout, result, either or both");
    if (!o.fraud_regions.empty()) f.region_concentration = parse_region_list(o.fraud_regions);
    f.max_shift = o.max_shift;
    f.avoid_round_counts = !o.allow_round_counts;
    fraud = f;
  }

  json config = {{"label", o.label},       {"stations", o.stations},         {"size", o.size},
                 {"turnout", o.turnout},   {"result", o.result},             {"regions", o.regions},
                 {"ballot_loss", o.ballot_loss}, {"seed", o.seed},           {"fraud", o.fraud},
                 {"version", kVersion}};
  if (fraud) {
    config["fraud_fraction"] = o.fraud_fraction;
    config["target_side"] = o.target_side;
    config["fraud_metric"] = o.fraud_metric;
    config["fraud_regions"] = o.fraud_regions.empty() ? json() : json(*fraud->region_concentration);
    config["max_shift"] = o.max_shift;
    config["avoid_round_counts"] = !o.allow_round_counts;
  }
  const RunInfo run("simulate", config, {}, o.seed);

  log("generating " + std::to_string(o.stations) + " stations");
  SyntheticElection election = generate(g, o.seed, o.workers);
  for (const auto& w : election.warnings) log.warn(w);
  ElectionDataset dataset = election.dataset;
  json fraud_json;
  std::optional<std::string> injections;
  if (fraud) {
    const auto result = inject_fraud(dataset, *fraud, o.seed);
    log("fraud: " + std::to_string(result.modified) + " of " + std::to_string(result.requested) +
        " requested stations modified");
    if (result.modified < result.requested) {
      log.warn("only " + std::to_string(result.modified) + " of " + std::to_string(result.requested) +
               " stations could be modified");
    }
    std::size_t skipped = 0;
    Csv csv(run);
    csv.header({"station_id", "status", "metric", "target", "registered_before", "given_before", "cast_before",
                "leader_before", "registered_after", "given_after", "cast_after", "leader_after"});
    for (const auto& e : result.log) {
      if (e.status != InjectionStatus::modified) ++skipped;
      csv.cell(e.station_id).cell(std::string(to_string(e.status)))
          .cell(e.metric ? std::string(to_string(*e.metric)) : std::string())
          .cell(e.target ? num(*e.target) : std::string())
          .cell(e.before.registered).cell(e.before.given).cell(e.before.cast).cell(e.before.leader)
          .cell(e.after.registered).cell(e.after.given).cell(e.after.cast).cell(e.after.leader);
      csv.end();
    }
    injections = csv.text();
    fraud_json = {{"requested", result.requested}, {"modified", result.modified}, {"skipped", skipped}};
    dataset = result.dataset;
  }

  std::ostringstream tsv;
  write_canonical_tsv(dataset, tsv);
  OutputSet outputs(o.out);
  const std::string stem = file_token(o.label);
  outputs.write(stem + ".tsv", tsv.str());
  json sidecar = {{"run", run.to_json()},
                  {"warnings", election.warnings},
                  {"stations", dataset.size()},
                  {"fraud", fraud_json},
                  {"tsv_fnv1a64", hex64(fnv1a64(tsv.str()))}};
  outputs.write(stem + ".run.json", sidecar.dump(2) + "\n");
  if (fmt.csv) {
    Csv truth(run);
    truth.header({"station_id", "p_turnout", "p_result"});
    for (std::size_t i = 0; i < election.truth.size(); ++i) {
      truth.cell(election.dataset.stations()[i].station_id).cell(election.truth[i].turnout)
          .cell(election.truth[i].result);
      truth.end();
    }
    outputs.write(stem + ".truth.csv", truth.text());
    if (injections) outputs.write(stem + ".injections.csv", *injections);
  }
  outputs.commit();
  print_summary(out, run, outputs);
  return 0;
}

// ------------------------------------------------------------------ wiring

void add_input(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.inputs, "Input file(s); one election each")->required();
  sub->add_option("--profile", o.profile, "Built-in column profile (canonical, RU, ES, DE, PL)")
      ->capture_default_str();
  sub->add_option("--profile-file", o.profile_file, "Profile JSON file (overrides --profile)");
  sub->add_option("--min-registered", o.min_registered, "Drop stations with fewer registered voters")
      ->capture_default_str();
  sub->add_option("--max-percent", o.max_percent, "Drop stations with turnout or result above this")
      ->capture_default_str();
  sub->add_option("--exclude-regions", o.exclude_regions, "Comma list of region codes, or @file");
  sub->add_option("--restrict-regions", o.restrict_regions, "Comma list of region codes, or @file");
}

void add_output(CLI::App* sub, Options& o, bool required = true) {
  auto* opt = sub->add_option("--out", o.out, "Output directory");
  if (required) opt->required();
  sub->add_option("--format", o.format, "Comma list of csv, json, svg")->capture_default_str();
}

void add_mc(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.models, "binomial | beta-binomial | clustered:<c>")->capture_default_str();
  sub->add_option("--iterations", o.iterations, "Monte Carlo iterations (>= 100)")->capture_default_str();
  sub->add_option("--levels", o.levels, "Percentile levels in percent")->capture_default_str();
  sub->add_flag("--refilter", o.refilter, "Re-apply the percentage cap to simulated stations");
}

void add_histogram(CLI::App* sub, Options& o) {
  sub->add_option("--bins", o.bins, "Bin width in percent")->capture_default_str();
  sub->add_flag("--jitter", o.jitter, "Add U(-0.5, 0.5) to counts before binning");
  sub->add_option("--metric", o.metric, "turnout, result or both")->capture_default_str();
  sub->add_flag("--average", o.average, "Average the histograms of all inputs");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integer-percentage heaping detector for polling-station data", "heaping"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--workers", o.workers, "Worker threads, 0 = all cores")->capture_default_str();
  app.add_flag("--quiet", o.quiet, "No progress messages");

  auto* validate = app.add_subcommand("validate", "Check an input file against a profile");
  validate->add_option("--input", o.inputs, "Input file(s)")->required();
  validate->add_option("--profile", o.profile, "Built-in column profile")->capture_default_str();
  validate->add_option("--profile-file", o.profile_file, "Profile JSON file");
  validate->add_option("--subtotals", o.subtotals, "Regional subtotals TSV to check against");
  validate->add_option("--out", o.out, "Also write validate.json here");

  auto* analyze = app.add_subcommand("analyze", "Integer-station statistics against the null model");
  add_input(analyze, o);
  add_mc(analyze, o);
  add_output(analyze, o);
  analyze->add_option("--window", o.windows, "Window half-width(s) in percent; the first is the main one")
      ->capture_default_str();

  auto* histogram = app.add_subcommand("histogram", "Voter-weighted histograms with Monte Carlo envelopes");
  add_input(histogram, o);
  add_mc(histogram, o);
  add_output(histogram, o);
  add_histogram(histogram, o);

  auto* spectrum = app.add_subcommand("spectrum", "Fourier spectra and spectrograms of the histograms");
  add_input(spectrum, o);
  add_mc(spectrum, o);
  add_output(spectrum, o);
  add_histogram(spectrum, o);

  auto* regions = app.add_subcommand("regions", "Largest integer peak per region and election");
  add_input(regions, o);
  add_mc(regions, o);
  add_output(regions, o);
  regions->add_option("--bins", o.bins, "Bin width in percent")->capture_default_str();
  regions->add_option("--window", o.windows, "Window half-width for the re-analysis")->capture_default_str();
  regions->add_option("--exclude-top", o.exclude_top, "Re-run the analysis without the top N regions");

  auto* fp = app.add_subcommand("fingerprint", "Joint turnout x result histogram");
  add_input(fp, o);
  add_output(fp, o);
  fp->add_flag("--weighted-correlation", o.weighted_correlation, "Weight the correlation by registered voters");

  auto* simulate = app.add_subcommand("simulate", "Write a synthetic election, optionally with injected fraud");
  simulate->add_option("--stations", o.stations, "Number of stations")->required();
  simulate->add_option("--size", o.size, "fixed:<V> | lognormal:<median>,<sigma>")->capture_default_str();
  simulate->add_option("--turnout", o.turnout, "fixed:<p> | beta:<a>,<b>")->capture_default_str();
  simulate->add_option("--result", o.result, "fixed:<p> | beta:<a>,<b>")->capture_default_str();
  simulate->add_option("--regions", o.regions, "Number of regions")->capture_default_str();
  simulate->add_option("--ballot-loss", o.ballot_loss, "Chance a given ballot is not cast")->capture_default_str();
  simulate->add_option("--label", o.label, "Election label and file stem")->capture_default_str();
  simulate->add_option("--fraud", o.fraud,
                       "none | integer_rounding | five_multiple_rounding | ballot_stuffing | extreme_cluster")
      ->capture_default_str();
  simulate->add_option("--fraud-fraction", o.fraud_fraction, "Share of eligible stations to modify")
      ->capture_default_str();
  simulate->add_option("--target-side", o.target_side, "just_above | nearest")->capture_default_str();
  simulate->add_option("--fraud-metric", o.fraud_metric, "turnout | result | either | both")
      ->capture_default_str();
  simulate->add_option("--fraud-regions", o.fraud_regions, "Only these regions (comma list or @file)");
  simulate->add_option("--max-shift", o.max_shift, "Largest upward push in points")->capture_default_str();
  simulate->add_flag("--allow-round-counts", o.allow_round_counts, "Do not avoid numerators ending in 0");
  add_output(simulate, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Progress log(err, o.quiet);
  try {
    if (*validate) return cmd_validate(o, out, log);
    if (*analyze) return cmd_analyze(o, out, log);
    if (*histogram) return cmd_histogram(o, out, log);
    if (*spectrum) return cmd_spectrum(o, out, log);
    if (*regions) return cmd_regions(o, out, log);
    if (*fp) return cmd_fingerprint(o, out, log);
    if (*simulate) return cmd_simulate(o, out, log);
  } catch (const SchemaError& e) {
    err << "heaping: schema error in field '" << e.field() << "': " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    err << "heaping: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "heaping: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace heaping::cli
