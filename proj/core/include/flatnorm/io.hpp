#pragma once

#include <map>
#include <string>
#include <vector>

#include "flatnorm/charge.hpp"
#include "flatnorm/family.hpp"

namespace flatnorm {

// How input files measure distance: coordinate rows with computed distances,
// or point ids into an explicit validated matrix.
struct MetricSpec {
  enum class Kind { Euclidean, Matrix };
  Kind kind = Kind::Euclidean;
  std::string matrix_path;  // set for Matrix
};

// "euclidean" or "matrix:PATH".
MetricSpec parse_metric_spec(const std::string& text);

// Plain text: first line n, then n rows of n space-separated distances.
// Validation (symmetry, triangle inequality, definiteness) happens in the
// space builder and surfaces as MetricError.
SpacePtr read_metric_matrix(const std::string& path);

// One charge file before space resolution. The header picks the mode:
// x1,...,xd,w for coordinate rows, id,w for matrix-metric rows. A file with
// only a header is the zero charge. Decimal points, no thousands separators.
struct ChargeRows {
  bool by_id = false;
  int dim = 0;                              // when !by_id
  std::vector<std::vector<double>> coords;  // when !by_id
  std::vector<PointId> ids;                 // when by_id
  std::vector<double> weights;              // one per row
  std::string origin;                       // path, for error messages
};
ChargeRows read_charge_rows(const std::string& path);

// Anchor files drop the weight column: header x1,...,xd or id.
struct AnchorRows {
  bool by_id = false;
  int dim = 0;
  std::vector<std::vector<double>> coords;
  std::vector<PointId> ids;
  std::string origin;
};
AnchorRows read_anchor_rows(const std::string& path);

// Resolves any number of charge and anchor files against one metric. In
// euclidean mode the union of all rows builds one space, near-duplicates
// coalescing; in matrix mode ids index the matrix directly. Mixing id rows
// with a euclidean metric (or coordinate rows with a matrix) is an error.
struct Ingest {
  SpacePtr space;
  std::vector<Charge> charges;                // one per charge file, in order
  std::vector<std::vector<PointId>> anchors;  // sorted and deduplicated
};
Ingest resolve_inputs(const MetricSpec& spec,
                      const std::vector<ChargeRows>& charge_rows,
                      const std::vector<AnchorRows>& anchor_rows = {});

// Writes x1,...,xd,w rows for euclidean spaces and id,w rows otherwise, at
// round-trip precision.
void write_charge_csv(const std::string& path, const Charge& q);

// {"metric": {...}, "members": [csv paths], "horizon": N} for file-backed
// families, or {"metric": ..., "members": {"generator": name, "params":
// {...}}, "horizon": N} for generated ones. Member paths are kept verbatim
// and joined with the manifest directory at load time.
struct FamilyManifest {
  MetricSpec metric;
  std::vector<std::string> members;
  std::string generator;  // non-empty for generated families
  std::map<std::string, double> params;
  int horizon = 0;  // 0 keeps every member; for generators it sets the count
};
FamilyManifest read_family_manifest(const std::string& path);
void write_family_manifest(const std::string& path, const FamilyManifest& m);

// Materializes a manifest: runs the generator, or loads the member files
// against the declared metric. Members are named by file stem.
Family load_family(const FamilyManifest& m, const std::string& base_dir);

}  // namespace flatnorm
