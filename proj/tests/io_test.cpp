#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "flatnorm/charge.hpp"
#include "flatnorm/errors.hpp"
#include "flatnorm/io.hpp"
#include "flatnorm/metric_space.hpp"
#include "flatnorm/norm.hpp"

using namespace flatnorm;
namespace fs = std::filesystem;

namespace {

// Per-process scratch directory, wiped when the suite ends.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("flatnorm-io-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string put(const std::string& name, const std::string& text) const {
    const auto p = dir / name;
    std::ofstream out(p);
    out << text;
    return p.string();
  }
};

}  // namespace

TEST_CASE("metric specs parse their two forms") {
  CHECK(parse_metric_spec("euclidean").kind == MetricSpec::Kind::Euclidean);
  const auto m = parse_metric_spec("matrix:space/d.txt");
  CHECK(m.kind == MetricSpec::Kind::Matrix);
  CHECK(m.matrix_path == "space/d.txt");
  CHECK_THROWS_AS(parse_metric_spec("manhattan"), ParseError);
  CHECK_THROWS_AS(parse_metric_spec("matrix:"), ParseError);
}

TEST_CASE("charge rows round-trip through csv at full precision") {
  Scratch sc;
  const auto s = build_euclidean_exact({{0.1, 0.2}, {1.0 / 3.0, 0.7}});
  const auto q =
      Charge::from_weights(s, {{0, 0.1 + 0.2}, {1, -2.0 / 3.0}});
  const auto path = sc.put("q.csv", "");
  write_charge_csv(path, q);

  const auto rows = read_charge_rows(path);
  CHECK_FALSE(rows.by_id);
  CHECK(rows.dim == 2);
  REQUIRE(rows.coords.size() == 2);
  CHECK(rows.coords[1][0] == 1.0 / 3.0);  // %.17g survives the trip exactly
  CHECK(rows.weights[1] == -2.0 / 3.0);

  const auto ingest = resolve_inputs({}, {rows});
  REQUIRE(ingest.charges.size() == 1);
  CHECK(flat_norm(ingest.charges[0] ) == doctest::Approx(flat_norm(q)).epsilon(1e-12));
}

TEST_CASE("euclidean resolution unions rows and coalesces duplicates") {
  Scratch sc;
  const auto a = sc.put("a.csv", "x1,x2,w\n0.1,0.2,1\n0.5,0.5,-1\n");
  const auto b = sc.put("b.csv", "x1,x2,w\n0.1,0.2,2\n0.9,0.1,0.5\n");
  const auto ingest =
      resolve_inputs({}, {read_charge_rows(a), read_charge_rows(b)});
  // (0.1, 0.2) appears in both files and becomes one point
  CHECK(ingest.space->size() == 3);
  REQUIRE(ingest.charges.size() == 2);
  CHECK(total_mass(ingest.charges[0]) == doctest::Approx(0.0));
  CHECK(total_mass(ingest.charges[1]) == doctest::Approx(2.5));
  // the shared point carries different weights in the two charges
  const std::vector<double> at{0.1, 0.2};
  const auto shared = ingest.space->find_by_coords(at, 1e-9);
  REQUIRE(shared >= 0);
  CHECK(ingest.charges[0].weight_at(shared) == doctest::Approx(1.0));
  CHECK(ingest.charges[1].weight_at(shared) == doctest::Approx(2.0));
}

TEST_CASE("header-only files give the zero charge on a stub space") {
  Scratch sc;
  const auto p = sc.put("z.csv", "x1,w\n");
  const auto ingest = resolve_inputs({}, {read_charge_rows(p)});
  REQUIRE(ingest.charges.size() == 1);
  CHECK(ingest.charges[0].empty());
  CHECK(flat_norm(ingest.charges[0]) == 0.0);
}

TEST_CASE("anchor files resolve against the same union space") {
  Scratch sc;
  const auto q = sc.put("q.csv", "x1,w\n0,1\n1,-1\n");
  const auto a = sc.put("a.csv", "x1\n0\n1\n1\n");  // duplicate anchor row
  const auto ingest =
      resolve_inputs({}, {read_charge_rows(q)}, {read_anchor_rows(a)});
  REQUIRE(ingest.anchors.size() == 1);
  CHECK(ingest.anchors[0].size() == 2);  // deduplicated
  const auto r = quasicontinuity_modulus(
      ingest.charges[0], {ingest.anchors[0], 0.125});
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("matrix metrics validate and bind id rows") {
  Scratch sc;
  const auto good = sc.put("d.txt", "3\n0 1 1\n1 0 1\n1 1 0\n");
  const auto q = sc.put("q.csv", "id,w\n0,1\n1,1\n2,-2\n");
  MetricSpec spec{MetricSpec::Kind::Matrix, good};
  const auto ingest = resolve_inputs(spec, {read_charge_rows(q)});
  CHECK(ingest.space->size() == 3);
  CHECK(flat_norm(ingest.charges[0]) == doctest::Approx(2.0).epsilon(1e-9));

  // id out of range
  const auto far = sc.put("far.csv", "id,w\n7,1\n");
  CHECK_THROWS_AS(resolve_inputs(spec, {read_charge_rows(far)}), ParseError);
  // coordinate rows cannot bind to a matrix metric
  const auto xy = sc.put("xy.csv", "x1,w\n0,1\n");
  CHECK_THROWS_AS(resolve_inputs(spec, {read_charge_rows(xy)}), ParseError);
  // id rows cannot bind to a euclidean metric
  CHECK_THROWS_AS(resolve_inputs({}, {read_charge_rows(q)}), ParseError);

  // broken matrices surface as MetricError with the defect named
  const auto asym = sc.put("asym.txt", "2\n0 1\n2 0\n");
  CHECK_THROWS_AS(read_metric_matrix(asym), MetricError);
  const auto tri = sc.put("tri.txt", "3\n0 1 3\n1 0 1\n3 1 0\n");
  CHECK_THROWS_AS(read_metric_matrix(tri), MetricError);
}

TEST_CASE("parse errors carry file and line context") {
  Scratch sc;
  const auto bad = sc.put("bad.csv", "x1,w\n0,1\n0.5,oops\n");
  try {
    read_charge_rows(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.csv:3") != std::string::npos);
  }

  CHECK_THROWS_AS(read_charge_rows(sc.put("h.csv", "a,b\n")), ParseError);
  CHECK_THROWS_AS(read_charge_rows(sc.put("w.csv", "x1,w\n1,2,3\n")),
                  ParseError);
  CHECK_THROWS_AS(read_charge_rows(sc.put("inf.csv", "x1,w\n0,inf\n")),
                  ParseError);
  CHECK_THROWS_AS(read_charge_rows((sc.dir / "missing.csv").string()),
                  ParseError);
  // dimension mismatch across files in one resolution
  const auto d1 = sc.put("d1.csv", "x1,w\n0,1\n");
  const auto d2 = sc.put("d2.csv", "x1,x2,w\n0,0,1\n");
  CHECK_THROWS_AS(resolve_inputs({}, {read_charge_rows(d1), read_charge_rows(d2)}),
                  ParseError);
}

TEST_CASE("byte order marks and padding are tolerated") {
  Scratch sc;
  const auto p = sc.put("bom.csv", "\xEF\xBB\xBFx1,w\n 0 , 1 \n\n1,-1\n");
  const auto rows = read_charge_rows(p);
  CHECK(rows.coords.size() == 2);
  CHECK(rows.weights[0] == 1.0);
}

TEST_CASE("manifests round-trip and load generated families") {
  Scratch sc;
  FamilyManifest m;
  m.generator = "escaping-diracs";
  m.params = {{"spacing", 2.0}};
  m.horizon = 5;
  const auto path = (sc.dir / "manifest.json").string();
  write_family_manifest(path, m);

  const auto back = read_family_manifest(path);
  CHECK(back.generator == "escaping-diracs");
  CHECK(back.params.at("spacing") == 2.0);
  CHECK(back.horizon == 5);
  CHECK(back.metric.kind == MetricSpec::Kind::Euclidean);

  const auto fam = load_family(back, sc.dir.string());
  CHECK(fam.size() == 5);  // horizon feeds the generator count
  CHECK(fam.name(0) == "delta1");
}

TEST_CASE("manifests load file members relative to their directory") {
  Scratch sc;
  fs::create_directories(sc.dir / "fam");
  const auto s = build_euclidean_exact({{0.0}, {2.0}});
  write_charge_csv((sc.dir / "fam" / "one.csv").string(),
                   Charge::dirac(s, 0));
  write_charge_csv((sc.dir / "fam" / "two.csv").string(),
                   Charge::dirac(s, 1));

  FamilyManifest m;
  m.members = {"one.csv", "two.csv"};
  const auto path = (sc.dir / "fam" / "manifest.json").string();
  write_family_manifest(path, m);

  const auto fam =
      load_family(read_family_manifest(path), (sc.dir / "fam").string());
  REQUIRE(fam.size() == 2);
  CHECK(fam.name(0) == "one");
  CHECK(fam.name(1) == "two");
  CHECK(fam.space()->size() == 2);  // union of both supports

  // horizon truncates file lists
  m.horizon = 1;
  write_family_manifest(path, m);
  CHECK(load_family(read_family_manifest(path), (sc.dir / "fam").string())
            .size() == 1);
}

TEST_CASE("malformed manifests name the offending key") {
  Scratch sc;
  const auto reject = [&](const char* name, const std::string& body) {
    const auto p = sc.put(name, body);
    CHECK_THROWS_AS(read_family_manifest(p), ParseError);
  };
  reject("j1.json", "{\"members\": [\"a.csv\"], \"extra\": 1}");
  reject("j2.json", "{\"members\": {\"generator\": 3}}");
  reject("j3.json", "{\"members\": [\"a.csv\"], \"horizon\": -2}");
  reject("j4.json", "{\"metric\": {\"kind\": \"taxicab\"}, \"members\": []}");
  reject("j5.json", "not json at all");
  reject("j6.json",
         "{\"members\": {\"generator\": \"escaping-diracs\", \"params\": "
         "{\"spacing\": \"wide\"}}}");
}
