#include "flatnorm/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "flatnorm/errors.hpp"
#include "flatnorm/generators.hpp"
#include "flatnorm/metric_space.hpp"
#include "json.hpp"

namespace flatnorm {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0)
    text.erase(0, 3);  // byte-order mark
  return text;
}

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trimmed(line.substr(start)));
      return out;
    }
    out.push_back(trimmed(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

[[noreturn]] void fail_at(const std::string& path, int line,
                          const std::string& msg) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(std::string_view tok, const std::string& path, int line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.begin(), tok.end(), v);
  if (ec != std::errc{} || ptr != tok.end() || !std::isfinite(v))
    fail_at(path, line, "bad number '" + std::string(tok) + "'");
  return v;
}

PointId parse_id(std::string_view tok, const std::string& path, int line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  PointId v = 0;
  const auto [ptr, ec] = std::from_chars(tok.begin(), tok.end(), v);
  if (ec != std::errc{} || ptr != tok.end() || v < 0)
    fail_at(path, line, "bad point id '" + std::string(tok) + "'");
  return v;
}

std::string lowered(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Header is either id[,w] or x1,...,xd[,w]; returns by_id and the dimension.
std::pair<bool, int> parse_header(const std::vector<std::string_view>& cols,
                                  bool expect_weight, const std::string& path) {
  std::vector<std::string> names;
  names.reserve(cols.size());
  for (auto c : cols) names.push_back(lowered(c));
  const size_t ncoord = names.size() - (expect_weight ? 1 : 0);
  if (expect_weight && (names.empty() || names.back() != "w"))
    fail_at(path, 1, "last column must be w");
  if (ncoord == 1 && names[0] == "id") return {true, 0};
  if (ncoord < 1) fail_at(path, 1, "no coordinate columns");
  for (size_t i = 0; i < ncoord; ++i)
    if (names[i] != "x" + std::to_string(i + 1))
      fail_at(path, 1, "expected column x" + std::to_string(i + 1) +
                           ", found '" + names[i] + "'");
  return {false, static_cast<int>(ncoord)};
}

struct RawRows {
  bool by_id = false;
  int dim = 0;
  std::vector<std::vector<double>> coords;
  std::vector<PointId> ids;
  std::vector<double> weights;
};

RawRows read_rows(const std::string& path, bool expect_weight) {
  const std::string text = read_text(path);
  RawRows out;
  bool saw_header = false;
  size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    const std::string_view line(
        text.data() + pos,
        (nl == std::string::npos ? text.size() : nl) - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (trimmed(line).empty()) continue;
    const auto cols = split(line, ',');
    if (!saw_header) {
      std::tie(out.by_id, out.dim) = parse_header(cols, expect_weight, path);
      saw_header = true;
      continue;
    }
    const size_t want = (out.by_id ? 1 : static_cast<size_t>(out.dim)) +
                        (expect_weight ? 1 : 0);
    if (cols.size() != want)
      fail_at(path, lineno,
              "expected " + std::to_string(want) + " columns, found " +
                  std::to_string(cols.size()));
    if (out.by_id) {
      out.ids.push_back(parse_id(cols[0], path, lineno));
    } else {
      std::vector<double> c;
      c.reserve(static_cast<size_t>(out.dim));
      for (int k = 0; k < out.dim; ++k)
        c.push_back(parse_double(cols[static_cast<size_t>(k)], path, lineno));
      out.coords.push_back(std::move(c));
    }
    if (expect_weight)
      out.weights.push_back(parse_double(cols.back(), path, lineno));
  }
  if (!saw_header) fail_at(path, 1, "missing header row");
  return out;
}

}  // namespace

MetricSpec parse_metric_spec(const std::string& text) {
  if (text == "euclidean") return {};
  if (text.rfind("matrix:", 0) == 0) {
    MetricSpec spec;
    spec.kind = MetricSpec::Kind::Matrix;
    spec.matrix_path = text.substr(7);
    if (spec.matrix_path.empty())
      throw ParseError("matrix metric needs a path: matrix:PATH");
    return spec;
  }
  throw ParseError("metric must be 'euclidean' or 'matrix:PATH', got '" +
                   text + "'");
}

SpacePtr read_metric_matrix(const std::string& path) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  long long n = 0;
  if (!(in >> n) || n < 1)
    throw ParseError(path + ": first token must be the point count");
  std::vector<double> m;
  m.reserve(static_cast<size_t>(n * n));
  std::string tok;
  while (in >> tok) {
    std::string_view sv(tok);
    if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(sv.begin(), sv.end(), v);
    if (ec != std::errc{} || ptr != sv.end() || !std::isfinite(v))
      throw ParseError(path + ": bad distance '" + tok + "'");
    m.push_back(v);
  }
  if (m.size() != static_cast<size_t>(n * n))
    throw ParseError(path + ": expected " + std::to_string(n * n) +
                     " distances, found " + std::to_string(m.size()));
  return build_from_matrix(static_cast<int>(n), m);
}

ChargeRows read_charge_rows(const std::string& path) {
  RawRows raw = read_rows(path, /*expect_weight=*/true);
  ChargeRows out;
  out.by_id = raw.by_id;
  out.dim = raw.dim;
  out.coords = std::move(raw.coords);
  out.ids = std::move(raw.ids);
  out.weights = std::move(raw.weights);
  out.origin = path;
  return out;
}

AnchorRows read_anchor_rows(const std::string& path) {
  RawRows raw = read_rows(path, /*expect_weight=*/false);
  AnchorRows out;
  out.by_id = raw.by_id;
  out.dim = raw.dim;
  out.coords = std::move(raw.coords);
  out.ids = std::move(raw.ids);
  out.origin = path;
  return out;
}

Ingest resolve_inputs(const MetricSpec& spec,
                      const std::vector<ChargeRows>& charge_rows,
                      const std::vector<AnchorRows>& anchor_rows) {
  Ingest out;
  if (spec.kind == MetricSpec::Kind::Matrix) {
    out.space = read_metric_matrix(spec.matrix_path);
    const int n = out.space->size();
    auto check = [&](bool by_id, const std::vector<PointId>& ids,
                     const std::string& origin) {
      if (!by_id)
        throw ParseError(origin +
                         ": coordinate rows cannot target a matrix metric; "
                         "use an id column");
      for (PointId p : ids)
        if (p >= n)
          throw ParseError(origin + ": id " + std::to_string(p) +
                           " outside matrix of size " + std::to_string(n));
    };
    for (const auto& cr : charge_rows) {
      check(cr.by_id, cr.ids, cr.origin);
      std::vector<std::pair<PointId, double>> w;
      w.reserve(cr.ids.size());
      for (size_t i = 0; i < cr.ids.size(); ++i)
        w.push_back({cr.ids[i], cr.weights[i]});
      out.charges.push_back(Charge::from_weights(out.space, std::move(w)));
    }
    for (const auto& ar : anchor_rows) {
      check(ar.by_id, ar.ids, ar.origin);
      std::vector<PointId> a = ar.ids;
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      out.anchors.push_back(std::move(a));
    }
    return out;
  }

  // Euclidean: the union of all rows defines the space.
  int dim = 0;
  std::string dim_origin;
  auto take_dim = [&](bool by_id, int d, const std::string& origin) {
    if (by_id)
      throw ParseError(origin +
                       ": id rows need a matrix metric; use x1..xd columns");
    if (dim == 0) {
      dim = d;
      dim_origin = origin;
    } else if (d != dim) {
      throw ParseError(origin + ": dimension " + std::to_string(d) +
                       " does not match " + dim_origin + " (" +
                       std::to_string(dim) + ")");
    }
  };
  std::vector<std::vector<double>> rows;
  for (const auto& cr : charge_rows) {
    take_dim(cr.by_id, cr.dim, cr.origin);
    rows.insert(rows.end(), cr.coords.begin(), cr.coords.end());
  }
  for (const auto& ar : anchor_rows) {
    take_dim(ar.by_id, ar.dim, ar.origin);
    rows.insert(rows.end(), ar.coords.begin(), ar.coords.end());
  }
  if (rows.empty())
    rows.push_back(std::vector<double>(std::max(dim, 1), 0.0));
  const EuclideanBuild built = build_euclidean(rows);
  out.space = built.space;

  size_t at = 0;
  for (const auto& cr : charge_rows) {
    std::vector<std::pair<PointId, double>> w;
    w.reserve(cr.coords.size());
    for (size_t i = 0; i < cr.coords.size(); ++i)
      w.push_back({built.row_to_point[at + i], cr.weights[i]});
    at += cr.coords.size();
    out.charges.push_back(Charge::from_weights(out.space, std::move(w)));
  }
  for (const auto& ar : anchor_rows) {
    std::vector<PointId> a;
    a.reserve(ar.coords.size());
    for (size_t i = 0; i < ar.coords.size(); ++i)
      a.push_back(built.row_to_point[at + i]);
    at += ar.coords.size();
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    out.anchors.push_back(std::move(a));
  }
  return out;
}

void write_charge_csv(const std::string& path, const Charge& q) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw ParseError("cannot write " + path);
  const MetricSpace& space = *q.space();
  char buf[64];
  if (space.euclidean()) {
    for (int k = 1; k <= space.dimension(); ++k)
      outf << "x" << k << ",";
    outf << "w\n";
    for (const auto& [id, w] : q.weights()) {
      for (const double c : space.coords(id)) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        outf << buf << ",";
      }
      std::snprintf(buf, sizeof buf, "%.17g", w);
      outf << buf << "\n";
    }
  } else {
    outf << "id,w\n";
    for (const auto& [id, w] : q.weights()) {
      std::snprintf(buf, sizeof buf, "%.17g", w);
      outf << id << "," << buf << "\n";
    }
  }
  if (!outf.flush()) throw ParseError("cannot write " + path);
}

namespace {

MetricSpec metric_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_metric_spec(j.get<std::string>());
  if (!j.is_object()) throw ParseError("manifest metric must be an object");
  MetricSpec spec;
  std::string kind = "euclidean";
  for (const auto& [key, val] : j.items()) {
    if (key == "kind") {
      if (!val.is_string()) throw ParseError("metric kind must be a string");
      kind = val.get<std::string>();
    } else if (key == "path") {
      if (!val.is_string()) throw ParseError("metric path must be a string");
      spec.matrix_path = val.get<std::string>();
    } else {
      throw ParseError("unknown metric key '" + key + "'");
    }
  }
  if (kind == "euclidean") {
    if (!spec.matrix_path.empty())
      throw ParseError("euclidean metric takes no path");
    return spec;
  }
  if (kind == "matrix") {
    if (spec.matrix_path.empty()) throw ParseError("matrix metric needs a path");
    spec.kind = MetricSpec::Kind::Matrix;
    return spec;
  }
  throw ParseError("unknown metric kind '" + kind + "'");
}

}  // namespace

FamilyManifest read_family_manifest(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(path + ": manifest must be an object");
  FamilyManifest m;
  bool saw_members = false;
  for (const auto& [key, val] : j.items()) {
    if (key == "metric") {
      m.metric = metric_from_json(val);
    } else if (key == "members") {
      saw_members = true;
      if (val.is_array()) {
        for (const auto& e : val) {
          if (!e.is_string())
            throw ParseError(path + ": member entries must be paths");
          m.members.push_back(e.get<std::string>());
        }
      } else if (val.is_object()) {
        for (const auto& [gk, gv] : val.items()) {
          if (gk == "generator") {
            if (!gv.is_string())
              throw ParseError(path + ": generator must be a name");
            m.generator = gv.get<std::string>();
          } else if (gk == "params") {
            if (!gv.is_object())
              throw ParseError(path + ": params must be an object");
            for (const auto& [pk, pv] : gv.items()) {
              if (!pv.is_number())
                throw ParseError(path + ": param '" + pk +
                                 "' must be a number");
              m.params[pk] = pv.get<double>();
            }
          } else {
            throw ParseError(path + ": unknown members key '" + gk + "'");
          }
        }
        if (m.generator.empty())
          throw ParseError(path + ": generator object needs a name");
      } else {
        throw ParseError(path + ": members must be a path list or generator");
      }
    } else if (key == "horizon") {
      if (!val.is_number_integer() || val.get<long long>() < 0)
        throw ParseError(path + ": horizon must be a nonnegative integer");
      m.horizon = val.get<int>();
    } else {
      throw ParseError(path + ": unknown manifest key '" + key + "'");
    }
  }
  if (!saw_members) throw ParseError(path + ": manifest needs members");
  return m;
}

void write_family_manifest(const std::string& path, const FamilyManifest& m) {
  nlohmann::ordered_json j;
  if (m.metric.kind == MetricSpec::Kind::Euclidean) {
    j["metric"] = {{"kind", "euclidean"}};
  } else {
    j["metric"] = {{"kind", "matrix"}, {"path", m.metric.matrix_path}};
  }
  if (!m.generator.empty()) {
    nlohmann::ordered_json g;
    g["generator"] = m.generator;
    g["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.params) g["params"][k] = v;
    j["members"] = g;
  } else {
    j["members"] = m.members;
  }
  if (m.horizon > 0) j["horizon"] = m.horizon;
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw ParseError("cannot write " + path);
  outf << j.dump(2) << "\n";
  if (!outf.flush()) throw ParseError("cannot write " + path);
}

Family load_family(const FamilyManifest& m, const std::string& base_dir) {
  if (!m.generator.empty()) {
    auto params = m.params;
    if (m.horizon > 0) params["count"] = m.horizon;
    return make_generator(m.generator, params);
  }
  std::vector<std::string> paths = m.members;
  if (m.horizon > 0 && static_cast<size_t>(m.horizon) < paths.size())
    paths.resize(static_cast<size_t>(m.horizon));
  std::vector<ChargeRows> rows;
  rows.reserve(paths.size());
  for (const auto& p : paths) {
    std::filesystem::path fp(p);
    if (fp.is_relative() && !base_dir.empty())
      fp = std::filesystem::path(base_dir) / fp;
    rows.push_back(read_charge_rows(fp.string()));
  }
  Ingest in = resolve_inputs(m.metric, rows);
  Family f(in.space);
  for (size_t i = 0; i < in.charges.size(); ++i)
    f.add(std::move(in.charges[i]),
          std::filesystem::path(paths[i]).stem().string());
  return f;
}

}  // namespace flatnorm
