#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dk/hypothesis_test.hpp"
#include "dk/model_manifold.hpp"
#include "dk/synth.hpp"
#include "dk/types.hpp"

namespace dk {

// ---------------------------------------------------------------------------
// Embedding matrices
//
// Binary container: magic "DKM1"; u32 version (currently 1); u64 n_rows; u64
// n_cols; n_rows id strings, each a u32 byte length followed by UTF-8 bytes;
// then the row-major float64 payload. All integers and floats little-endian.
// Round trips are bit-exact.
// ---------------------------------------------------------------------------
EmbeddingMatrix read_matrix(const std::string& path);
void write_matrix(const EmbeddingMatrix& emb, const std::string& path);

// CSV import: header row = column names with the first column the id column;
// every data row is `id,v_1,...,v_d`. No quoting/escaping support.
EmbeddingMatrix read_matrix_csv(const std::string& path);

// ---------------------------------------------------------------------------
// Kernels
//
// CSV edge list with header `src_id,dst_id`, one undirected edge per line,
// src_id < dst_id lexicographically, lines sorted; plus a JSON sidecar (same
// path with the extension replaced by .json) carrying {n_nodes, k,
// symmetrization, ids} and optionally the producing command's config echo.
// ---------------------------------------------------------------------------
void write_kernel(const DataKernel& kernel, const std::string& path,
                  const nlohmann::json& config_echo = nlohmann::json());
DataKernel read_kernel(const std::string& path);

// ---------------------------------------------------------------------------
// Reports and bundles (JSON with shortest round-trip floats, sorted keys)
// ---------------------------------------------------------------------------
nlohmann::json report_json(const TestReport& report);
void write_report(const TestReport& report, const std::string& path);

struct ManifoldBundle {
  ModelDistanceMatrix distances;
  ModelManifold manifold;
  int triangle_violations = 0;
  bool has_alignment = false;
  Matrix aligned_coordinates;        // set when has_alignment
  double procrustes_residual = 0.0;  // set when has_alignment
  nlohmann::json config;             // producing command's echo; may be null
};

nlohmann::json bundle_json(const ManifoldBundle& bundle);

// Writes the JSON bundle to `path` plus two plot-ready CSV sidecars next to
// it: <stem>.distances.csv and <stem>.coordinates.csv.
void write_bundle(const ManifoldBundle& bundle, const std::string& path);

void write_distance_csv(const ModelDistanceMatrix& dist, const std::string& path);
void write_coordinates_csv(const std::vector<std::string>& labels, const Matrix& coords,
                           const std::string& path);

// Labeled coordinate CSV (header `model,<names...>`, rows `label,x,...`),
// e.g. a Procrustes reference configuration.
std::pair<std::vector<std::string>, Matrix> read_labeled_csv(const std::string& path);

// Synthetic model spec document: {n_items, latent_dim, noise_scale, seed,
// mixture: [{weight, center: [...]}, ...]}.
SyntheticModelSpec read_model_spec(const std::string& path);

}  // namespace dk
