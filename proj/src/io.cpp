#include "dk/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dk/error.hpp"

namespace dk {

namespace {

static_assert(std::endian::native == std::endian::little,
              "matrix files are little-endian and this code writes host-order bytes");

constexpr char kMagic[4] = {'D', 'K', 'M', '1'};
constexpr std::uint32_t kVersion = 1;

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell, const std::string& where) {
  double v = 0.0;
  const char* last = cell.data() + cell.size();
  const auto res = std::from_chars(cell.data(), last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw InputError("cannot parse number '" + cell + "' in " + where, ErrorCode::ParseError);
  return v;
}

template <typename T>
void write_raw(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in, const std::string& path, const std::string& what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T)))
    throw InputError(path + ": truncated " + what, ErrorCode::TruncatedPayload);
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string sidecar_path(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".json");
  return p.string();
}

std::ifstream open_input(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::in | std::ios::binary : std::ios::in);
  if (!in) throw InputError("cannot open " + path, ErrorCode::MissingFile);
  return in;
}

std::ofstream open_output(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::out | std::ios::binary | std::ios::trunc
                                 : std::ios::out | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path + " for writing", ErrorCode::MissingFile);
  return out;
}

void check_wrote(std::ostream& out, const std::string& path) {
  if (!out) throw InputError("failed while writing " + path);
}

nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in = open_input(path, false);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what(), ErrorCode::ParseError);
  }
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json matrix_rows_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_matrix(const EmbeddingMatrix& emb, const std::string& path) {
  emb.validate();
  std::ofstream out = open_output(path, true);
  out.write(kMagic, 4);
  write_raw(out, kVersion);
  write_raw(out, static_cast<std::uint64_t>(emb.n_rows()));
  write_raw(out, static_cast<std::uint64_t>(emb.n_cols()));
  for (const auto& id : emb.ids) {
    write_raw(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  std::vector<double> row(static_cast<std::size_t>(emb.n_cols()));
  for (Index i = 0; i < emb.n_rows(); ++i) {
    for (Index j = 0; j < emb.n_cols(); ++j) row[static_cast<std::size_t>(j)] = emb.values(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  check_wrote(out, path);
}

EmbeddingMatrix read_matrix(const std::string& path) {
  std::ifstream in = open_input(path, true);

  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
    throw InputError(path + ": bad magic (not a DKM1 matrix file)", ErrorCode::BadMagic);

  const auto version = read_raw<std::uint32_t>(in, path, "version field");
  if (version != kVersion)
    throw InputError(path + ": unsupported version " + std::to_string(version),
                     ErrorCode::BadVersion);

  const auto n_rows = read_raw<std::uint64_t>(in, path, "row count");
  const auto n_cols = read_raw<std::uint64_t>(in, path, "column count");
  constexpr std::uint64_t kMaxCells = 1ull << 31;
  if (n_rows == 0 || n_cols == 0 || n_rows > kMaxCells || n_cols > kMaxCells ||
      n_rows * n_cols > kMaxCells)
    throw InputError(path + ": implausible header dimensions", ErrorCode::ParseError);

  EmbeddingMatrix emb;
  emb.ids.reserve(n_rows);
  for (std::uint64_t i = 0; i < n_rows; ++i) {
    const auto len = read_raw<std::uint32_t>(in, path, "id table");
    if (len > (1u << 20))
      throw InputError(path + ": implausible id length", ErrorCode::ParseError);
    std::string id(len, '\0');
    in.read(id.data(), len);
    if (in.gcount() != static_cast<std::streamsize>(len))
      throw InputError(path + ": truncated id table", ErrorCode::TruncatedPayload);
    emb.ids.push_back(std::move(id));
  }

  const std::uint64_t n_values = n_rows * n_cols;
  std::vector<double> payload(n_values);
  const auto want = static_cast<std::streamsize>(n_values * sizeof(double));
  in.read(reinterpret_cast<char*>(payload.data()), want);
  if (in.gcount() != want)
    throw InputError(path + ": payload length mismatch", ErrorCode::TruncatedPayload);
  in.peek();
  if (!in.eof())
    throw InputError(path + ": payload length mismatch (trailing bytes)",
                     ErrorCode::TruncatedPayload);

  emb.values = Eigen::Map<const RowMajorMatrix>(payload.data(), static_cast<Index>(n_rows),
                                                static_cast<Index>(n_cols));
  emb.validate();
  return emb;
}

EmbeddingMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_input(path, false);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file", ErrorCode::ParseError);
  strip_cr(line);
  const auto header = split_csv_line(line);
  if (header.size() < 2)
    throw InputError(path + ": header needs an id column plus at least one value column",
                     ErrorCode::ParseError);

  std::vector<std::string> ids;
  std::vector<double> values;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw InputError(path + ": row " + std::to_string(ids.size() + 2) + " has " +
                           std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(header.size()),
                       ErrorCode::ParseError);
    ids.push_back(cells[0]);
    for (std::size_t j = 1; j < cells.size(); ++j) values.push_back(parse_double(cells[j], path));
  }
  if (ids.empty()) throw InputError(path + ": no data rows", ErrorCode::ParseError);

  EmbeddingMatrix emb;
  emb.values = Eigen::Map<const RowMajorMatrix>(values.data(), static_cast<Index>(ids.size()),
                                                static_cast<Index>(header.size() - 1));
  emb.ids = std::move(ids);
  emb.validate();
  return emb;
}

void write_kernel(const DataKernel& kernel, const std::string& path,
                  const nlohmann::json& config_echo) {
  kernel.validate();
  const std::string meta_path = sidecar_path(path);
  if (meta_path == path)
    throw InputError("kernel path must not use the .json extension (reserved for the sidecar)");
  for (const auto& id : kernel.ids)
    if (id.find_first_of(",\r\n") != std::string::npos)
      throw InputError("id '" + id + "' contains characters the edge-list format cannot hold");

  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(static_cast<std::size_t>(kernel.adjacency.nonZeros() / 2));
  for (Index outer = 0; outer < kernel.adjacency.outerSize(); ++outer)
    for (SparseMatrix::InnerIterator it(kernel.adjacency, outer); it; ++it) {
      if (it.row() >= it.col()) continue;  // each undirected edge once
      std::string src = kernel.ids[static_cast<std::size_t>(it.row())];
      std::string dst = kernel.ids[static_cast<std::size_t>(it.col())];
      if (dst < src) std::swap(src, dst);
      edges.emplace_back(std::move(src), std::move(dst));
    }
  std::sort(edges.begin(), edges.end());

  std::ofstream out = open_output(path, false);
  out << "src_id,dst_id\n";
  for (const auto& [src, dst] : edges) out << src << ',' << dst << '\n';
  check_wrote(out, path);

  nlohmann::json meta;
  meta["n_nodes"] = kernel.n_nodes();
  meta["k"] = kernel.k;
  meta["symmetrization"] = to_string(kernel.rule);
  meta["ids"] = kernel.ids;
  if (!config_echo.is_null()) meta["config"] = config_echo;
  std::ofstream meta_out = open_output(meta_path, false);
  meta_out << meta.dump(2) << '\n';
  check_wrote(meta_out, meta_path);
}

DataKernel read_kernel(const std::string& path) {
  const std::string meta_path = sidecar_path(path);
  const nlohmann::json meta = parse_json_file(meta_path);

  DataKernel kernel;
  std::uint64_t n_nodes = 0;
  try {
    n_nodes = meta.at("n_nodes").get<std::uint64_t>();
    kernel.k = meta.at("k").get<int>();
    kernel.rule = symmetrization_from_string(meta.at("symmetrization").get<std::string>());
    kernel.ids = meta.at("ids").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(meta_path + ": " + e.what(), ErrorCode::ParseError);
  }
  if (kernel.ids.size() != n_nodes)
    throw InputError(meta_path + ": ids length disagrees with n_nodes", ErrorCode::ParseError);

  std::unordered_map<std::string, Index> index;
  index.reserve(kernel.ids.size());
  for (std::size_t i = 0; i < kernel.ids.size(); ++i)
    if (!index.emplace(kernel.ids[i], static_cast<Index>(i)).second)
      throw InputError(meta_path + ": duplicate id " + kernel.ids[i], ErrorCode::DuplicateId);

  std::ifstream in = open_input(path, false);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty edge list", ErrorCode::ParseError);
  strip_cr(line);
  if (line != "src_id,dst_id")
    throw InputError(path + ": bad header '" + line + "'", ErrorCode::ParseError);

  std::vector<Eigen::Triplet<double>> triplets;
  std::set<std::pair<Index, Index>> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto where = path + ":" + std::to_string(line_no);
    const auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw InputError(where + ": expected 'src_id,dst_id'", ErrorCode::ParseError);
    if (!(cells[0] < cells[1]))
      throw InputError(where + ": edge endpoints must satisfy src_id < dst_id",
                       ErrorCode::ParseError);
    auto lookup = [&](const std::string& id) {
      const auto hit = index.find(id);
      if (hit == index.end())
        throw InputError(where + ": unknown id '" + id + "'", ErrorCode::IdMismatch);
      return hit->second;
    };
    const Index i = lookup(cells[0]);
    const Index j = lookup(cells[1]);
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second)
      throw InputError(where + ": duplicate edge", ErrorCode::ParseError);
    triplets.emplace_back(i, j, 1.0);
    triplets.emplace_back(j, i, 1.0);
  }

  const Index n = static_cast<Index>(kernel.ids.size());
  kernel.adjacency.resize(n, n);
  kernel.adjacency.setFromTriplets(triplets.begin(), triplets.end());
  kernel.adjacency.makeCompressed();
  kernel.validate();
  return kernel;
}

nlohmann::json report_json(const TestReport& report) {
  nlohmann::json j;
  j["config"] = {{"k", report.k},
                 {"dim", report.dim},
                 {"n_bootstrap", report.n_bootstrap},
                 {"seed", report.seed},
                 {"symmetrization", to_string(report.rule)},
                 {"normalize_rows", report.normalized_rows},
                 {"resparsify_bootstrap", report.resparsified_bootstrap}};
  j["ids"] = report.ids;
  j["observed"] = to_std(report.observed_distances);
  j["p_values"] = to_std(report.p_values);
  return j;
}

void write_report(const TestReport& report, const std::string& path) {
  std::ofstream out = open_output(path, false);
  out << report_json(report).dump(2) << '\n';
  check_wrote(out, path);
}

nlohmann::json bundle_json(const ManifoldBundle& bundle) {
  nlohmann::json j;
  j["labels"] = bundle.distances.model_labels;
  j["distances"] = matrix_rows_json(bundle.distances.values);
  j["dim"] = bundle.distances.dim;
  j["normalized"] = bundle.distances.normalized;
  j["coordinates"] = matrix_rows_json(bundle.manifold.coordinates);
  j["eigenvalues"] = to_std(bundle.manifold.eigenvalue_spectrum);
  j["negative_mass"] = bundle.manifold.negative_mass;
  j["triangle_violations"] = bundle.triangle_violations;
  if (bundle.has_alignment) {
    j["procrustes_residual"] = bundle.procrustes_residual;
    j["aligned_coordinates"] = matrix_rows_json(bundle.aligned_coordinates);
  } else {
    j["procrustes_residual"] = nullptr;
  }
  if (!bundle.config.is_null()) j["config"] = bundle.config;
  return j;
}

void write_bundle(const ManifoldBundle& bundle, const std::string& path) {
  std::ofstream out = open_output(path, false);
  out << bundle_json(bundle).dump(2) << '\n';
  check_wrote(out, path);

  const std::filesystem::path p(path);
  const std::string base = (p.parent_path() / p.stem()).string();
  write_distance_csv(bundle.distances, base + ".distances.csv");
  const Matrix& coords =
      bundle.has_alignment ? bundle.aligned_coordinates : bundle.manifold.coordinates;
  write_coordinates_csv(bundle.distances.model_labels, coords, base + ".coordinates.csv");
}

void write_distance_csv(const ModelDistanceMatrix& dist, const std::string& path) {
  std::ofstream out = open_output(path, false);
  out << "model";
  for (const auto& label : dist.model_labels) out << ',' << label;
  out << '\n';
  for (Index i = 0; i < dist.values.rows(); ++i) {
    out << dist.model_labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < dist.values.cols(); ++j) out << ',' << format_double(dist.values(i, j));
    out << '\n';
  }
  check_wrote(out, path);
}

void write_coordinates_csv(const std::vector<std::string>& labels, const Matrix& coords,
                           const std::string& path) {
  if (static_cast<Index>(labels.size()) != coords.rows())
    throw InputError("coordinate row count does not match label count", ErrorCode::ShapeMismatch);
  std::ofstream out = open_output(path, false);
  out << "model";
  for (Index j = 0; j < coords.cols(); ++j) out << ",c" << j;
  out << '\n';
  for (Index i = 0; i < coords.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < coords.cols(); ++j) out << ',' << format_double(coords(i, j));
    out << '\n';
  }
  check_wrote(out, path);
}

std::pair<std::vector<std::string>, Matrix> read_labeled_csv(const std::string& path) {
  std::ifstream in = open_input(path, false);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file", ErrorCode::ParseError);
  strip_cr(line);
  const auto header = split_csv_line(line);
  if (header.size() < 2)
    throw InputError(path + ": header needs a label column plus at least one value column",
                     ErrorCode::ParseError);

  std::vector<std::string> labels;
  std::vector<double> values;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw InputError(path + ": inconsistent column count", ErrorCode::ParseError);
    labels.push_back(cells[0]);
    for (std::size_t j = 1; j < cells.size(); ++j) values.push_back(parse_double(cells[j], path));
  }
  if (labels.empty()) throw InputError(path + ": no data rows", ErrorCode::ParseError);

  Matrix coords = Eigen::Map<const RowMajorMatrix>(
      values.data(), static_cast<Index>(labels.size()), static_cast<Index>(header.size() - 1));
  return {std::move(labels), std::move(coords)};
}

SyntheticModelSpec read_model_spec(const std::string& path) {
  const nlohmann::json j = parse_json_file(path);
  SyntheticModelSpec spec;
  try {
    spec.n_items = j.at("n_items").get<std::int64_t>();
    spec.latent_dim = j.at("latent_dim").get<int>();
    spec.noise_scale = j.value("noise_scale", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    for (const auto& comp : j.at("mixture")) {
      MixtureComponent c;
      c.weight = comp.at("weight").get<double>();
      const auto center = comp.at("center").get<std::vector<double>>();
      c.center = Eigen::Map<const Vector>(center.data(), static_cast<Index>(center.size()));
      spec.mixture.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what(), ErrorCode::ParseError);
  }
  spec.validate();
  return spec;
}

}  // namespace dk
