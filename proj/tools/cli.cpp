#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "report.hpp"
#include "sidkit/sidkit.hpp"

namespace sidkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string report_path;
  bool json_stdout = false;
  bool csv_header = false;
};

struct KernelFlags {
  std::optional<int> exponent;
  std::optional<int> order_m;
  std::optional<int> dim_n;
  double kappa = 1.0;
  double radius_floor = 1e-12;
};

struct SweepFlags {
  SweepConfig config;
  unsigned threads = 0;
};

EmbeddingCloud load(const std::string& path, const Common& common,
                    RunReport& report) {
  CsvOptions csv;
  csv.skip_header = common.csv_header;
  EmbeddingCloud cloud = read_cloud(path, csv);
  report.inputs.push_back({path, cloud.label(), cloud.count(), cloud.dim()});
  return cloud;
}

// `-p` wins over `--m`; with neither, m = floor(n / 2).
KernelSpec resolve_kernel(const KernelFlags& k, Eigen::Index cloud_dim) {
  const int n = k.dim_n.value_or(static_cast<int>(cloud_dim));
  if (n != cloud_dim) {
    throw ShapeError("--n " + std::to_string(n) +
                     " does not match cloud dimension " +
                     std::to_string(cloud_dim));
  }
  if (k.exponent) {
    return KernelSpec::from_exponent(*k.exponent, n, k.kappa, k.radius_floor);
  }
  return KernelSpec::from_order(k.order_m.value_or(std::max(1, n / 2)), n,
                                k.kappa, k.radius_floor);
}

void add_kernel_flags(CLI::App* app, KernelFlags& k) {
  app->add_option("-p,--exponent", k.exponent,
                  "Kernel exponent p = 2m - n (overrides --m)");
  app->add_option("--m,--order", k.order_m, "Kernel order m")
      ->check(CLI::PositiveNumber);
  app->add_option("--n,--dim", k.dim_n, "Kernel dimension n (default: cloud dim)")
      ->check(CLI::PositiveNumber);
  app->add_option("--kappa", k.kappa, "Kernel scale")->capture_default_str();
  app->add_option("--radius-floor", k.radius_floor, "Distance clamp")
      ->capture_default_str();
}

void add_sweep_flags(CLI::App* app, SweepFlags& s) {
  auto& c = s.config;
  app->add_option("--start", c.multiplier_start, "First sigma_q multiplier")
      ->capture_default_str();
  app->add_option("--stop", c.multiplier_stop, "Last sigma_q multiplier")
      ->capture_default_str();
  app->add_option("--step", c.multiplier_step, "Multiplier step")
      ->capture_default_str();
  app->add_option("--mx,--test-points", c.test_points_per_r,
                  "Test points per cube")
      ->capture_default_str();
  app->add_option("--batch", c.batch_size, "Centers per chunk")
      ->capture_default_str();
  app->add_option("--cap", c.max_samples_per_cloud, "Max samples per cloud")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  app->add_option("--threads", s.threads, "Worker cap (0 = all cores)")
      ->capture_default_str();
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--report", c.report_path, "Write the JSON run report here");
  app->add_flag("--json", c.json_stdout, "Print the JSON report to stdout");
  app->add_flag("--header", c.csv_header, "CSV inputs have a header row");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

json curve_json(const SidCurve& curve) {
  json entries = json::array();
  for (const auto& e : curve.entries) {
    entries.push_back({{"multiplier", e.multiplier},
                       {"side_r", e.side_r},
                       {"sd", number(e.sd_value)},
                       {"stderr", number(e.mc_stderr)}});
  }
  return entries;
}

json ranking_json(const RankingResult& r) {
  json sources = json::array();
  int rank = 0;
  for (const auto& rs : r.ordered_sources) {
    sources.push_back({{"rank", ++rank},
                       {"source", rs.source},
                       {"borda_score", rs.borda_score},
                       {"per_metric_rank", rs.per_metric_rank},
                       {"flags", rs.flags}});
  }
  return {{"target", r.target},
          {"method", r.method == RankingResult::Method::BordaVote
                         ? "borda_vote"
                         : "single_metric"},
          {"metrics", r.metrics},
          {"ordered_sources", sources}};
}

std::vector<Eigen::MatrixXd> rows_to_images(const EmbeddingCloud& cloud,
                                            std::optional<int> height,
                                            std::optional<int> width) {
  int h = height.value_or(0);
  int w = width.value_or(0);
  if (!height || !width) {
    static const std::regex shape_re(R"((\d+)x(\d+)$)");
    std::smatch m;
    if (!std::regex_search(cloud.label(), m, shape_re)) {
      throw ArgumentError("image shape unknown: pass --height/--width or use "
                          "a label ending in <H>x<W>");
    }
    h = height.value_or(std::stoi(m[1]));
    w = width.value_or(std::stoi(m[2]));
  }
  if (static_cast<long long>(h) * w != cloud.dim()) {
    throw ShapeError("image shape " + std::to_string(h) + "x" +
                     std::to_string(w) + " does not match row length " +
                     std::to_string(cloud.dim()));
  }
  std::vector<Eigen::MatrixXd> images;
  images.reserve(static_cast<std::size_t>(cloud.count()));
  for (Eigen::Index i = 0; i < cloud.count(); ++i) {
    images.emplace_back(Eigen::Map<const RowMatrix>(
        cloud.data().row(i).data(), h, w));
  }
  return images;
}

int exit_code_for(const Error& e) {
  switch (e.error_class()) {
    case ErrorClass::Input: return kUsage;
    case ErrorClass::Numeric: return kNumeric;
    case ErrorClass::Io: return kIo;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"sidkit: signed distances and baseline metrics between "
               "embedding clouds",
               "sidkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  RunReport report;
  report.tool_version = kVersion;

  // info
  std::string info_path;
  auto* info = app.add_subcommand("info", "Label, size and moments of a cloud");
  info->add_option("path", info_path, "EMB1 or CSV file")->required();
  add_common(info, common);

  // sid
  std::string sid_source, sid_target, sid_out;
  KernelFlags sid_kernel;
  SweepFlags sid_sweep_flags;
  auto* sid = app.add_subcommand("sid", "Signed distance sweep and CSID");
  sid->add_option("--source", sid_source, "Source cloud (mu_p)")->required();
  sid->add_option("--target", sid_target, "Target cloud (mu_q)")->required();
  sid->add_option("--out", sid_out, "Curve CSV output path");
  add_kernel_flags(sid, sid_kernel);
  add_sweep_flags(sid, sid_sweep_flags);
  add_common(sid, common);

  // fid / kid
  std::string pair_a, pair_b;
  std::uint64_t pair_seed = 0;
  auto* fid_cmd = app.add_subcommand("fid", "Frechet distance of fitted Gaussians");
  auto* kid_cmd = app.add_subcommand("kid", "Unbiased polynomial-kernel MMD^2");
  for (auto* c : {fid_cmd, kid_cmd}) {
    c->add_option("--a,--source", pair_a, "First cloud")->required();
    c->add_option("--b,--target", pair_b, "Second cloud")->required();
    c->add_option("--seed", pair_seed, "Subsampling seed")->capture_default_str();
    add_common(c, common);
  }

  // sintheta
  std::string st_source, st_target;
  auto* st = app.add_subcommand("sintheta", "min sin-theta subspace distance");
  st->add_option("--source", st_source, "Source cloud")->required();
  st->add_option("--target", st_target, "Target cloud (eigen-gaps)")->required();
  add_common(st, common);

  // sharpness
  std::string sh_path;
  std::optional<int> sh_height, sh_width;
  auto* sh = app.add_subcommand("sharpness",
                                "Laplacian edge-map variance of grayscale images");
  sh->add_option("path", sh_path, "Cloud with one flattened image per row")
      ->required();
  sh->add_option("--height", sh_height, "Image height")->check(CLI::PositiveNumber);
  sh->add_option("--width", sh_width, "Image width")->check(CLI::PositiveNumber);
  add_common(sh, common);

  // rank
  std::string rank_table, rank_target, rank_metric = "csid", rank_vote_list,
                                       rank_out;
  auto* rank = app.add_subcommand("rank", "Friendly-neighbor ranking");
  rank->add_option("--table", rank_table,
                   "CSV with source,target,metric,value[,excluded,reason]")
      ->required();
  rank->add_option("--target", rank_target, "Target label")->required();
  auto* metric_opt =
      rank->add_option("--metric", rank_metric, "Single metric to rank by")
          ->capture_default_str();
  rank->add_option("--vote", rank_vote_list,
                   "Comma-separated metrics for a Borda vote")
      ->excludes(metric_opt);
  rank->add_option("--out", rank_out, "Ranking CSV output path");
  add_common(rank, common);

  // synth
  std::string synth_preset, synth_dir = ".";
  std::uint64_t synth_seed = 0;
  int synth_samples = 500;
  auto* synth = app.add_subcommand("synth", "Write a synthetic scenario to EMB1");
  synth->add_option("--preset", synth_preset, "Scenario preset")->required();
  synth->add_option("--seed", synth_seed, "RNG seed")->capture_default_str();
  synth->add_option("--out-dir", synth_dir, "Output directory")
      ->capture_default_str();
  synth->add_option("--samples", synth_samples, "Samples per cloud")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_common(synth, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (info->parsed()) {
      report.command = "info";
      const EmbeddingCloud cloud = load(info_path, common, report);
      report.results = {{"label", cloud.label()},
                        {"count", cloud.count()},
                        {"dim", cloud.dim()},
                        {"tags", cloud.tags()}};
      if (cloud.count() >= 2) {
        const CloudStats s = compute_stats(cloud, false);
        report.results["mean_norm"] = s.mean.norm();
        report.results["sigma_q"] = s.sigma_q;
      } else {
        report.results["mean_norm"] = cloud.data().row(0).norm();
        report.results["sigma_q"] = nullptr;
      }
      out << "label " << cloud.label() << "\nN " << cloud.count() << "\nn "
          << cloud.dim() << "\nmean_norm "
          << report.results["mean_norm"].dump() << "\nsigma_q "
          << report.results["sigma_q"].dump() << '\n';
    } else if (sid->parsed()) {
      report.command = "sid";
      const EmbeddingCloud source = load(sid_source, common, report);
      const EmbeddingCloud target = load(sid_target, common, report);
      if (source.dim() != target.dim()) {
        throw ShapeError("source dim " + std::to_string(source.dim()) +
                         " != target dim " + std::to_string(target.dim()));
      }
      const KernelSpec kernel = resolve_kernel(sid_kernel, target.dim());
      const SweepConfig& cfg = sid_sweep_flags.config;
      const SidCurve curve =
          sid_sweep(source, target, kernel, cfg, sid_sweep_flags.threads);
      const CsidValue total = csid(curve);
      report.parameters = {
          {"exponent_p", kernel.exponent_p()},
          {"dim_n", kernel.dim_n()},
          {"branch", to_string(kernel.branch())},
          {"kappa", kernel.kappa()},
          {"radius_floor", kernel.radius_floor()},
          {"multiplier_start", cfg.multiplier_start},
          {"multiplier_stop", cfg.multiplier_stop},
          {"multiplier_step", cfg.multiplier_step},
          {"test_points_per_r", cfg.test_points_per_r},
          {"batch_size", cfg.batch_size},
          {"max_samples_per_cloud", cfg.max_samples_per_cloud},
          {"seed", cfg.seed},
          {"threads", sid_sweep_flags.threads}};
      if (kernel.order_m()) report.parameters["order_m"] = *kernel.order_m();
      report.results = {{"csid", number(total.value)},
                        {"sigma_q", curve.sigma_q},
                        {"curve", curve_json(curve)}};
      if (!sid_out.empty()) {
        write_text_file(sid_out, curve_csv(curve));
        report.results["curve_path"] = sid_out;
      }
      out << "CSID " << format_double(total.value) << " over "
          << curve.entries.size() << " radii (sigma_q "
          << format_double(curve.sigma_q) << ")\n";
      if (sid_out.empty() && !common.json_stdout) out << curve_csv(curve);
    } else if (fid_cmd->parsed()) {
      report.command = "fid";
      const EmbeddingCloud a = load(pair_a, common, report);
      const EmbeddingCloud b = load(pair_b, common, report);
      const FidReport r = fid(a, b, pair_seed);
      report.parameters = {{"seed", pair_seed},
                           {"sample_cap", kFidSampleCap}};
      report.results = {{"fid", r.value},
                        {"mean_term", r.mean_term},
                        {"trace_term", r.trace_term},
                        {"samples_used", {r.samples_used.first,
                                          r.samples_used.second}}};
      out << "FID " << format_double(r.value) << '\n';
    } else if (kid_cmd->parsed()) {
      report.command = "kid";
      const EmbeddingCloud a = load(pair_a, common, report);
      const EmbeddingCloud b = load(pair_b, common, report);
      const KidReport r = kid(a, b, pair_seed);
      report.parameters = {{"seed", pair_seed},
                           {"sample_cap", kKidSampleCap},
                           {"block", kKidBlock}};
      report.results = {{"kid", r.value},
                        {"block_count", r.block_count},
                        {"samples_used", {r.samples_used.first,
                                          r.samples_used.second}}};
      out << "KID " << format_double(r.value) << '\n';
    } else if (st->parsed()) {
      report.command = "sintheta";
      const EmbeddingCloud p = load(st_source, common, report);
      const EmbeddingCloud q = load(st_target, common, report);
      const SinThetaReport r = min_sin_theta(p, q);
      json per_s = json::array();
      for (const auto& e : r.per_s) {
        per_s.push_back({{"s", e.s}, {"bound", number(e.bound)}});
      }
      report.parameters = {{"fixed_r", r.fixed_r},
                           {"s_min", 3},
                           {"s_max", r.per_s.back().s}};
      report.results = {{"min_sin_theta", number(r.min_value)},
                        {"dim_n", r.dim_n},
                        {"degenerate_count", r.degenerate_count},
                        {"per_s", per_s}};
      out << "min sin-theta " << format_double(r.min_value) << '\n';
    } else if (sh->parsed()) {
      report.command = "sharpness";
      const EmbeddingCloud cloud = load(sh_path, common, report);
      const auto images = rows_to_images(cloud, sh_height, sh_width);
      const double v = sharpness(images);
      report.parameters = {{"height", images.front().rows()},
                           {"width", images.front().cols()},
                           {"stencil", "laplacian-4"}};
      report.results = {{"sharpness", v}, {"images", images.size()}};
      out << "sharpness " << format_double(v) << '\n';
    } else if (rank->parsed()) {
      report.command = "rank";
      const MetricTable table = read_metric_table(rank_table);
      report.inputs.push_back(
          {rank_table, fs::path(rank_table).stem().string(),
           static_cast<long long>(table.cells().size()), 0});
      RankingResult result;
      if (!rank_vote_list.empty()) {
        std::vector<Metric> metrics;
        std::stringstream ss(rank_vote_list);
        std::string name;
        while (std::getline(ss, name, ',')) metrics.push_back(parse_metric(name));
        result = rank_vote(table, rank_target, metrics);
      } else {
        result = rank_single(table, rank_target, parse_metric(rank_metric));
      }
      report.parameters = {
          {"target", rank_target},
          {"method", rank_vote_list.empty() ? "single" : "borda"},
          {"metrics", rank_vote_list.empty() ? rank_metric : rank_vote_list}};
      report.results = {{"ranking", ranking_json(result)}};
      std::ostringstream csv;
      write_ranking_csv(result, csv);
      if (!rank_out.empty()) {
        write_text_file(rank_out, csv.str());
        report.results["ranking_path"] = rank_out;
      }
      if (!common.json_stdout) out << csv.str();
    } else if (synth->parsed()) {
      report.command = "synth";
      const Scenario sc = scenario(synth_preset, synth_seed, synth_samples);
      fs::create_directories(synth_dir);
      const fs::path src = fs::path(synth_dir) / (sc.name + "_source.emb");
      const fs::path tgt = fs::path(synth_dir) / (sc.name + "_target.emb");
      write_cloud(sc.source, src);
      write_cloud(sc.target, tgt);
      report.parameters = {{"preset", sc.name},
                           {"seed", synth_seed},
                           {"samples", synth_samples}};
      report.results = {{"source_path", src.string()},
                        {"target_path", tgt.string()},
                        {"expectation", sc.expectation}};
      out << src.string() << '\n' << tgt.string() << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  report.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();

  const std::string text = to_json(report).dump(2) + "\n";
  if (common.json_stdout) out << text;
  if (!common.report_path.empty()) {
    try {
      write_text_file(common.report_path, text);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return exit_code_for(e);
    }
  }
  return kOk;
}

}  // namespace sidkit::cli
