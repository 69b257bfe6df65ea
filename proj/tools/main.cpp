// Command-line surface over the flatnorm library. One command per run,
// machine-readable report on stdout, diagnostics on stderr.
//
// Exit codes: 0 success, 2 unreadable or malformed input, 3 invalid metric,
// 4 solver failure, 5 index cap exceeded, 1 anything else.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flatnorm/charge.hpp"
#include "flatnorm/errors.hpp"
#include "flatnorm/family.hpp"
#include "flatnorm/generators.hpp"
#include "flatnorm/hypermeasure.hpp"
#include "flatnorm/io.hpp"
#include "flatnorm/metric_space.hpp"
#include "flatnorm/norm.hpp"

namespace {

using flatnorm::Charge;
using flatnorm::MetricSpace;
using flatnorm::PointId;
using json = nlohmann::ordered_json;

struct Output {
  json report;
  std::vector<std::string> csv;    // header first
  std::vector<std::string> human;  // plain lines
};

void emit(const Output& out, const std::string& format) {
  if (format == "json") {
    std::cout << out.report.dump(2) << "\n";
  } else if (format == "csv") {
    for (const auto& line : out.csv) std::cout << line << "\n";
  } else {
    for (const auto& line : out.human) std::cout << line << "\n";
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json maximizer_json(const flatnorm::BLFunction& f, const MetricSpace& space) {
  json arr = json::array();
  for (const auto& [id, phi] : f.values()) {
    json row;
    row["id"] = id;
    if (space.euclidean()) {
      json x = json::array();
      for (double c : space.coords(id)) x.push_back(c);
      row["x"] = x;
    }
    row["phi"] = phi;
    arr.push_back(std::move(row));
  }
  return arr;
}

flatnorm::NormResult solve_route(const Charge& q, const std::string& method,
                                 double* cross_gap) {
  *cross_gap = 0.0;
  if (method == "dual-flow") return flatnorm::norm_dual_flow(q);
  if (method == "vertex-enum") return flatnorm::norm_oracle(q);
  if (method == "primal-lp") return flatnorm::norm_primal(q);
  // auto: primal checked against the flow route, as flat_norm does, but
  // keeping the maximizer and certificate for the report.
  auto primal = flatnorm::norm_primal(q);
  const auto flow = flatnorm::norm_dual_flow(q);
  const double drift = std::fabs(primal.value - flow.value);
  const double tol =
      flatnorm::kDualityTolerance * (1.0 + flatnorm::total_variation(q));
  if (drift > tol)
    throw flatnorm::SolverError("independent routes disagree: " +
                                fmt(primal.value) + " vs " + fmt(flow.value));
  *cross_gap = drift;
  return primal;
}

Output report_norm(const char* command, const Charge& q,
                   const std::string& method) {
  double cross = 0.0;
  const auto r = solve_route(q, method, &cross);
  Output out;
  out.report["command"] = command;
  out.report["value"] = r.value;
  out.report["method"] = r.method;
  out.report["certificate_gap"] = std::max(r.certificate_gap, cross);
  out.report["maximizer"] = maximizer_json(r.maximizer, *q.space());
  out.csv = {"value,method,certificate_gap",
             fmt(r.value) + "," + r.method + "," +
                 fmt(std::max(r.certificate_gap, cross))};
  out.human = {std::string(command) + " " + fmt(r.value) + "  (" + r.method +
               ", certificate gap " + fmt(std::max(r.certificate_gap, cross)) +
               ")"};
  return out;
}

// --- subcommand option blocks -----------------------------------------

struct NormOpts {
  std::string charge_path;
  std::string metric = "euclidean";
  std::string method = "auto";
  std::string format = "json";
};

struct DistOpts {
  std::string a_path, b_path;
  std::string metric = "euclidean";
  std::string method = "auto";
  std::string format = "json";
};

struct QuasiOpts {
  std::string charge_path;
  std::string anchors_path;
  double delta = 1.0;
  std::string metric = "euclidean";
  std::string format = "json";
};

struct HyperOpts {
  std::string sequence = "canonical";
  std::string function = "identity";
  double eps = 1e-6;
  long cap = flatnorm::Hypermeasure::kDefaultIndexCap;
  std::string metric = "euclidean";
  std::string format = "json";
};

struct FamilyOpts {
  std::string manifest_path;
  double eps = 1e-2;
  int depth = 20;
  int horizon = -1;  // -1 keeps the manifest's value
  std::string format = "json";
};

struct GenOpts {
  std::string name;
  std::string out_dir;
  long count = 0;
  long seed = -1;
  double spacing = 0.0;
  std::vector<std::string> params;
  std::string format = "json";
};

int run_norm(const NormOpts& o) {
  const auto spec = flatnorm::parse_metric_spec(o.metric);
  auto ingest =
      flatnorm::resolve_inputs(spec, {flatnorm::read_charge_rows(o.charge_path)});
  emit(report_norm("norm", ingest.charges[0], o.method), o.format);
  return 0;
}

int run_dist(const DistOpts& o) {
  const auto spec = flatnorm::parse_metric_spec(o.metric);
  auto ingest = flatnorm::resolve_inputs(
      spec, {flatnorm::read_charge_rows(o.a_path),
             flatnorm::read_charge_rows(o.b_path)});
  emit(report_norm("dist", ingest.charges[0] - ingest.charges[1], o.method),
       o.format);
  return 0;
}

int run_quasi(const QuasiOpts& o) {
  const auto spec = flatnorm::parse_metric_spec(o.metric);
  std::vector<flatnorm::AnchorRows> anchors;
  if (!o.anchors_path.empty())
    anchors.push_back(flatnorm::read_anchor_rows(o.anchors_path));
  auto ingest = flatnorm::resolve_inputs(
      spec, {flatnorm::read_charge_rows(o.charge_path)}, anchors);
  flatnorm::Neighborhood nb;
  if (!ingest.anchors.empty()) nb.anchors = ingest.anchors[0];
  nb.delta = o.delta;
  const auto r = flatnorm::quasicontinuity_modulus(ingest.charges[0], nb);
  Output out;
  out.report["command"] = "quasi";
  out.report["modulus"] = r.value;
  out.report["anchors_used"] = static_cast<long>(nb.anchors.size());
  out.report["delta"] = o.delta;
  out.report["method"] = r.method;
  out.report["certificate_gap"] = r.certificate_gap;
  out.csv = {"modulus,anchors_used,delta",
             fmt(r.value) + "," + std::to_string(nb.anchors.size()) + "," +
                 fmt(o.delta)};
  out.human = {"modulus " + fmt(r.value) + "  (" +
               std::to_string(nb.anchors.size()) + " anchors, delta " +
               fmt(o.delta) + ")"};
  emit(out, o.format);
  return 0;
}

int run_hyper(const HyperOpts& o) {
  flatnorm::Hypermeasure h = [&] {
    if (o.sequence == "canonical")
      return flatnorm::Hypermeasure::canonical_example();
    if (o.sequence.rfind("charge:", 0) == 0) {
      const auto spec = flatnorm::parse_metric_spec(o.metric);
      auto ingest = flatnorm::resolve_inputs(
          spec, {flatnorm::read_charge_rows(o.sequence.substr(7))});
      return flatnorm::Hypermeasure::from_charge(ingest.charges[0]);
    }
    throw flatnorm::ParseError("sequence must be 'canonical' or 'charge:PATH'");
  }();

  const auto space = h.space();
  flatnorm::BLFunction f = [&] {
    if (o.function == "zero") return flatnorm::BLFunction::zero();
    if (!space->euclidean())
      throw flatnorm::ParseError("function '" + o.function +
                                 "' needs coordinates");
    if (o.function == "identity") {
      double sup = 0.0;
      for (PointId p = 0; p < space->size(); ++p)
        sup = std::max(sup, std::fabs(space->coords(p)[0]));
      return flatnorm::BLFunction::from_callable(
          [](const MetricSpace& s, PointId p) { return s.coords(p)[0]; }, sup,
          1.0, "identity");
    }
    if (o.function.rfind("bump:", 0) == 0) {
      const std::string ctext = o.function.substr(5);
      double c = 0.0;
      const auto [ptr, ec] =
          std::from_chars(ctext.data(), ctext.data() + ctext.size(), c);
      if (ec != std::errc{} || ptr != ctext.data() + ctext.size())
        throw flatnorm::ParseError("bad bump center '" + ctext + "'");
      return flatnorm::BLFunction::from_callable(
          [c](const MetricSpace& s, PointId p) {
            return std::max(0.0, 1.0 - std::fabs(s.coords(p)[0] - c));
          },
          1.0, 1.0, "bump");
    }
    throw flatnorm::ParseError(
        "function must be 'identity', 'zero', or 'bump:CENTER'");
  }();

  const auto r = h.evaluate(f, o.eps, o.cap);
  Output out;
  out.report["command"] = "hyper";
  out.report["value"] = r.value;
  out.report["error_bound"] = r.error_bound;
  out.report["index_used"] = r.index_used;
  out.csv = {"value,error_bound,index_used",
             fmt(r.value) + "," + fmt(r.error_bound) + "," +
                 std::to_string(r.index_used)};
  out.human = {"value " + fmt(r.value) + " +/- " + fmt(r.error_bound) +
               "  (sequence index " + std::to_string(r.index_used) + ")"};
  emit(out, o.format);
  return 0;
}

int run_family(const FamilyOpts& o) {
  auto manifest = flatnorm::read_family_manifest(o.manifest_path);
  if (o.horizon >= 0) manifest.horizon = o.horizon;
  const std::string base =
      std::filesystem::path(o.manifest_path).parent_path().string();
  const auto fam = flatnorm::load_family(manifest, base);
  const auto rep = flatnorm::precompactness_verdict(fam, o.eps, o.depth);

  Output out;
  out.report["command"] = "family";
  out.report["verdict"] = rep.verdict;
  out.report["witness"] = rep.witness;
  json wm = json::array();
  if (rep.witness_a >= 0) wm.push_back(fam.name(rep.witness_a));
  if (rep.witness_b >= 0) wm.push_back(fam.name(rep.witness_b));
  out.report["witness_members"] = wm;
  out.report["witness_value"] = rep.witness_value;
  out.report["sup_norm"] = rep.sup_norm;
  out.report["eps"] = o.eps;
  out.report["depth"] = rep.depth;
  json names = json::array(), norms = json::array();
  for (int i = 0; i < fam.size(); ++i) {
    names.push_back(fam.name(i));
    norms.push_back(rep.norms[static_cast<size_t>(i)]);
  }
  out.report["members"] = names;
  out.report["norms"] = norms;
  json tight = json::array();
  for (const auto& t : rep.tightness) {
    json row;
    row["eps"] = t.eps;
    row["radius"] = t.radius;
    row["core_size"] = t.core_size;
    row["achieved"] = t.achieved;
    tight.push_back(std::move(row));
  }
  out.report["tightness"] = tight;
  json profile = json::array();
  for (size_t i = 0; i < rep.equi_profile.size(); ++i) {
    json row;
    row["level"] = i + 1;
    row["delta"] = std::ldexp(1.0, -static_cast<int>(i) - 1);
    row["modulus"] = rep.equi_profile[i];
    profile.push_back(std::move(row));
  }
  out.report["equi_profile"] = profile;

  out.csv.push_back("series,key,value");
  out.csv.push_back("verdict,," + rep.verdict);
  out.csv.push_back("witness,," + rep.witness);
  out.csv.push_back("witness_value,," + fmt(rep.witness_value));
  out.csv.push_back("sup_norm,," + fmt(rep.sup_norm));
  for (int i = 0; i < fam.size(); ++i)
    out.csv.push_back("norm," + fam.name(i) + "," +
                      fmt(rep.norms[static_cast<size_t>(i)]));
  for (const auto& t : rep.tightness) {
    out.csv.push_back("tightness_radius," + fmt(t.eps) + "," + fmt(t.radius));
    out.csv.push_back("tightness_core," + fmt(t.eps) + "," +
                      std::to_string(t.core_size));
  }
  for (size_t i = 0; i < rep.equi_profile.size(); ++i)
    out.csv.push_back("equi," + std::to_string(i + 1) + "," +
                      fmt(rep.equi_profile[i]));

  out.human.push_back("verdict: " + rep.verdict + " (witness " + rep.witness +
                      ", value " + fmt(rep.witness_value) + ")");
  out.human.push_back("sup norm " + fmt(rep.sup_norm) + " over " +
                      std::to_string(fam.size()) + " members");
  if (!rep.equi_profile.empty()) {
    double best = rep.equi_profile[0];
    for (double v : rep.equi_profile) best = std::min(best, v);
    out.human.push_back("modulus profile reaches " + fmt(best) + " by depth " +
                        std::to_string(rep.depth));
  }
  emit(out, o.format);
  return 0;
}

int run_gen(const GenOpts& o) {
  std::map<std::string, double> params;
  for (const auto& kv : o.params) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw flatnorm::ParseError("--param expects KEY=VALUE, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || ptr != val.data() + val.size())
      throw flatnorm::ParseError("bad value in --param " + kv);
    params[key] = v;
  }
  if (o.count > 0) params["count"] = static_cast<double>(o.count);
  if (o.seed >= 0) params["seed"] = static_cast<double>(o.seed);
  if (o.spacing > 0.0) params["spacing"] = o.spacing;

  const auto fam = flatnorm::make_generator(o.name, params);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec)
    throw flatnorm::ParseError("cannot create " + o.out_dir + ": " +
                               ec.message());

  std::vector<std::string> files;
  flatnorm::FamilyManifest manifest;
  for (int i = 0; i < fam.size(); ++i) {
    const auto* q = std::get_if<Charge>(&fam.member(i));
    if (!q) continue;  // generators emit charges only
    const std::string name = fam.name(i) + ".csv";
    flatnorm::write_charge_csv((fs::path(o.out_dir) / name).string(), *q);
    files.push_back(name);
    manifest.members.push_back(name);
  }
  flatnorm::write_family_manifest(
      (fs::path(o.out_dir) / "manifest.json").string(), manifest);
  files.push_back("manifest.json");

  // Plot-ready profiles of the generated family.
  {
    const auto basis = flatnorm::default_basis(fam.space(), 20);
    const auto profile = flatnorm::equi_modulus_profile(fam, basis, 1e-3);
    std::ofstream pf(fs::path(o.out_dir) / "modulus_profile.csv");
    pf << "level,delta,modulus\n";
    for (size_t i = 0; i < profile.size(); ++i)
      pf << i + 1 << "," << fmt(std::ldexp(1.0, -static_cast<int>(i) - 1))
         << "," << fmt(profile[i]) << "\n";
    files.push_back("modulus_profile.csv");
  }
  {
    std::ofstream tf(fs::path(o.out_dir) / "tightness_profile.csv");
    tf << "eps,radius,core_size,achieved\n";
    for (const double e : {0.5, 0.25, 0.1, 0.05, 0.02, 0.01}) {
      const auto t = flatnorm::tightness_profile(fam, e);
      tf << fmt(e) << "," << fmt(t.radius) << "," << t.core.size() << ","
         << (t.achieved ? 1 : 0) << "\n";
    }
    files.push_back("tightness_profile.csv");
  }

  Output out;
  out.report["command"] = "gen";
  out.report["generator"] = o.name;
  out.report["out_dir"] = o.out_dir;
  out.report["members"] = fam.size();
  json jf = json::array();
  for (const auto& f : files) jf.push_back(f);
  out.report["files"] = jf;
  out.csv.push_back("file");
  for (const auto& f : files) out.csv.push_back(f);
  out.human.push_back("wrote " + std::to_string(files.size()) + " files to " +
                      o.out_dir);
  emit(out, o.format);
  return 0;
}

void add_format(CLI::App* cmd, std::string& target) {
  cmd->add_option("--format", target, "Output format")
      ->check(CLI::IsMember({"json", "csv", "human"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bounded-Lipschitz norms of discrete signed measures, certified limit "
      "evaluation, and precompactness analysis of measure families"};
  app.require_subcommand(1);

  NormOpts norm_opts;
  auto* norm_cmd = app.add_subcommand("norm", "Norm of a charge from CSV");
  norm_cmd->add_option("charge", norm_opts.charge_path, "Charge CSV")
      ->required();
  norm_cmd->add_option("--metric", norm_opts.metric,
                       "euclidean or matrix:PATH")
      ->capture_default_str();
  norm_cmd->add_option("--method", norm_opts.method, "Solver route")
      ->check(CLI::IsMember({"auto", "primal-lp", "dual-flow", "vertex-enum"}))
      ->capture_default_str();
  add_format(norm_cmd, norm_opts.format);

  DistOpts dist_opts;
  auto* dist_cmd =
      app.add_subcommand("dist", "Distance between two charges from CSV");
  dist_cmd->add_option("a", dist_opts.a_path, "First charge CSV")->required();
  dist_cmd->add_option("b", dist_opts.b_path, "Second charge CSV")->required();
  dist_cmd->add_option("--metric", dist_opts.metric, "euclidean or matrix:PATH")
      ->capture_default_str();
  dist_cmd->add_option("--method", dist_opts.method, "Solver route")
      ->check(CLI::IsMember({"auto", "primal-lp", "dual-flow", "vertex-enum"}))
      ->capture_default_str();
  add_format(dist_cmd, dist_opts.format);

  QuasiOpts quasi_opts;
  auto* quasi_cmd = app.add_subcommand(
      "quasi", "Quasicontinuity modulus of a charge near anchors");
  quasi_cmd->add_option("charge", quasi_opts.charge_path, "Charge CSV")
      ->required();
  quasi_cmd->add_option("--anchors", quasi_opts.anchors_path,
                        "Anchor CSV (x1..xd or id); empty means none");
  quasi_cmd->add_option("--delta", quasi_opts.delta, "Bound on the anchors")
      ->capture_default_str();
  quasi_cmd
      ->add_option("--metric", quasi_opts.metric, "euclidean or matrix:PATH")
      ->capture_default_str();
  add_format(quasi_cmd, quasi_opts.format);

  HyperOpts hyper_opts;
  auto* hyper_cmd = app.add_subcommand(
      "hyper", "Evaluate a certified limit against a test function");
  hyper_cmd
      ->add_option("--sequence", hyper_opts.sequence,
                   "canonical or charge:PATH")
      ->capture_default_str();
  hyper_cmd
      ->add_option("--function", hyper_opts.function,
                   "identity, zero, or bump:CENTER")
      ->capture_default_str();
  hyper_cmd->add_option("--eps", hyper_opts.eps, "Requested accuracy")
      ->capture_default_str();
  hyper_cmd->add_option("--cap", hyper_opts.cap, "Largest sequence index")
      ->capture_default_str();
  hyper_cmd
      ->add_option("--metric", hyper_opts.metric,
                   "Metric for charge:PATH sequences")
      ->capture_default_str();
  add_format(hyper_cmd, hyper_opts.format);

  FamilyOpts family_opts;
  auto* family_cmd = app.add_subcommand(
      "family", "Precompactness report for a family manifest");
  family_cmd->add_option("manifest", family_opts.manifest_path,
                         "Manifest JSON")
      ->required();
  family_cmd->add_option("--eps", family_opts.eps, "Decision threshold")
      ->capture_default_str();
  family_cmd->add_option("--depth", family_opts.depth, "Probe depth")
      ->capture_default_str();
  family_cmd->add_option("--horizon", family_opts.horizon,
                         "Override the manifest horizon");
  add_format(family_cmd, family_opts.format);

  GenOpts gen_opts;
  auto* gen_cmd =
      app.add_subcommand("gen", "Write a generated family corpus to disk");
  gen_cmd->add_option("name", gen_opts.name, "Generator name")->required();
  gen_cmd->add_option("--out", gen_opts.out_dir, "Output directory")
      ->required();
  gen_cmd->add_option("--count", gen_opts.count, "Member count");
  gen_cmd->add_option("--seed", gen_opts.seed, "Random seed");
  gen_cmd->add_option("--spacing", gen_opts.spacing, "Spacing parameter");
  gen_cmd->add_option("--param", gen_opts.params,
                      "Extra generator parameter KEY=VALUE");
  add_format(gen_cmd, gen_opts.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*norm_cmd) return run_norm(norm_opts);
    if (*dist_cmd) return run_dist(dist_opts);
    if (*quasi_cmd) return run_quasi(quasi_opts);
    if (*hyper_cmd) return run_hyper(hyper_opts);
    if (*family_cmd) return run_family(family_opts);
    if (*gen_cmd) return run_gen(gen_opts);
  } catch (const flatnorm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const flatnorm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const flatnorm::MetricError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const flatnorm::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const flatnorm::IndexCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
