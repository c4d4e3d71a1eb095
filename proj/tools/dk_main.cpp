// dk: build k-NN data kernels from embedding matrices, run per-datum
// bootstrap comparison tests, and map model collections onto a Euclidean
// manifold. Exit codes: 0 success, 1 input/config error, 2 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dk/data_kernel.hpp"
#include "dk/error.hpp"
#include "dk/hypothesis_test.hpp"
#include "dk/io.hpp"
#include "dk/model_manifold.hpp"
#include "dk/parallel.hpp"
#include "dk/rdpg.hpp"
#include "dk/synth.hpp"
#include "dk/types.hpp"

namespace {

dk::EmbeddingMatrix load_embeddings(const std::string& path, const std::string& format) {
  return format == "csv" ? dk::read_matrix_csv(path) : dk::read_matrix(path);
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw dk::InputError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw dk::InputError("failed while writing " + path);
}

// Model labels from file stems; collisions get a numeric suffix so labels
// stay unique and deterministic.
std::vector<std::string> labels_from_paths(const std::vector<std::string>& paths) {
  std::vector<std::string> labels;
  std::set<std::string> used;
  labels.reserve(paths.size());
  for (const auto& path : paths) {
    const std::string stem = std::filesystem::path(path).stem().string();
    std::string label = stem;
    int suffix = 2;
    while (!used.insert(label).second) label = stem + "_" + std::to_string(suffix++);
    labels.push_back(std::move(label));
  }
  return labels;
}

dk::Matrix reorder_reference(const std::vector<std::string>& want,
                             const std::vector<std::string>& have, const dk::Matrix& coords) {
  std::unordered_map<std::string, dk::Index> at;
  for (std::size_t i = 0; i < have.size(); ++i) at[have[i]] = static_cast<dk::Index>(i);
  dk::Matrix out(static_cast<dk::Index>(want.size()), coords.cols());
  for (std::size_t i = 0; i < want.size(); ++i) {
    const auto hit = at.find(want[i]);
    if (hit == at.end())
      throw dk::InputError("reference has no coordinates for model '" + want[i] + "'",
                           dk::ErrorCode::IdMismatch);
    out.row(static_cast<dk::Index>(i)) = coords.row(hit->second);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"data-kernel toolkit: k-NN graphs, bootstrap tests, model manifolds"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = machine parallelism)")
      ->envname("DK_THREADS");

  // ---- kernel build -------------------------------------------------------
  auto* kernel_cmd = app.add_subcommand("kernel", "data-kernel operations");
  kernel_cmd->require_subcommand(1);
  auto* kernel_build = kernel_cmd->add_subcommand("build", "build a k-NN kernel from embeddings");
  struct {
    std::string embeddings, format = "bin", sym = "max", out;
    int k = 0;
    bool normalize = false;
  } kb;
  kernel_build->add_option("--embeddings", kb.embeddings, "embedding matrix file")->required();
  kernel_build->add_option("--format", kb.format, "embedding file format")
      ->check(CLI::IsMember({"bin", "csv"}));
  kernel_build->add_option("--k", kb.k, "neighbors per node")->required();
  kernel_build->add_flag("--normalize-rows", kb.normalize, "L2-normalize embedding rows first");
  kernel_build->add_option("--sym", kb.sym, "symmetrization rule")
      ->check(CLI::IsMember({"max", "avg"}));
  kernel_build->add_option("-o,--output", kb.out, "output kernel path")->required();
  kernel_build->callback([&] {
    dk::set_thread_count(threads);
    dk::EmbeddingMatrix emb = load_embeddings(kb.embeddings, kb.format);
    if (kb.normalize) emb = dk::normalize_rows(emb);
    const dk::DataKernel kernel =
        dk::build_data_kernel(emb, kb.k, dk::symmetrization_from_string(kb.sym));
    nlohmann::json echo = {{"command", "kernel build"},
                           {"embeddings", kb.embeddings},
                           {"format", kb.format},
                           {"k", kb.k},
                           {"normalize_rows", kb.normalize},
                           {"symmetrization", dk::to_string(kernel.rule)},
                           {"threads", threads}};
    dk::write_kernel(kernel, kb.out, echo);
  });

  // ---- test run -----------------------------------------------------------
  auto* test_cmd = app.add_subcommand("test", "per-datum comparison tests");
  test_cmd->require_subcommand(1);
  auto* test_run = test_cmd->add_subcommand("run", "bootstrap test between two embedding files");
  struct {
    std::string emb_a, emb_b, format = "bin", sym = "max", out;
    int k = 16, bootstrap = 200, dim = 0;
    std::uint64_t seed = 0;
    bool normalize = false, resparsify = false;
  } tr;
  test_run->add_option("--emb-a", tr.emb_a, "first embedding matrix")->required();
  test_run->add_option("--emb-b", tr.emb_b, "second embedding matrix")->required();
  test_run->add_option("--format", tr.format, "embedding file format")
      ->check(CLI::IsMember({"bin", "csv"}));
  test_run->add_option("--k", tr.k, "neighbors per node")->required();
  test_run->add_option("--bootstrap", tr.bootstrap, "bootstrap replicates");
  test_run->add_option("--seed", tr.seed, "base RNG seed");
  test_run->add_option("--dim", tr.dim, "embedding dimension (0 = scree elbow)");
  test_run->add_option("--sym", tr.sym, "symmetrization rule")
      ->check(CLI::IsMember({"max", "avg"}));
  test_run->add_flag("--normalize-rows", tr.normalize, "L2-normalize embedding rows first");
  test_run->add_flag("--resparsify-bootstrap", tr.resparsify,
                     "re-sparsify bootstrap replicates like k-NN graphs");
  test_run->add_option("-o,--output", tr.out, "output report path")->required();
  test_run->callback([&] {
    dk::set_thread_count(threads);
    dk::TestOptions opts;
    opts.k = tr.k;
    opts.n_bootstrap = tr.bootstrap;
    opts.seed = tr.seed;
    opts.dim = tr.dim;
    opts.rule = dk::symmetrization_from_string(tr.sym);
    opts.normalize_rows = tr.normalize;
    opts.resparsify_bootstrap = tr.resparsify;
    const dk::TestReport report =
        dk::run_test(load_embeddings(tr.emb_a, tr.format), load_embeddings(tr.emb_b, tr.format), opts);
    nlohmann::json j = dk::report_json(report);
    j["config"]["command"] = "test run";
    j["config"]["inputs"] = {{"emb_a", tr.emb_a}, {"emb_b", tr.emb_b}, {"format", tr.format}};
    j["config"]["threads"] = threads;
    write_json_file(j, tr.out);
  });

  // ---- manifold build -----------------------------------------------------
  auto* manifold_cmd = app.add_subcommand("manifold", "model-manifold operations");
  manifold_cmd->require_subcommand(1);
  auto* manifold_build =
      manifold_cmd->add_subcommand("build", "MDS manifold from a set of kernels");
  struct {
    std::vector<std::string> kernels;
    std::string reference, out;
    int dim = 0, mds_dim = 2;
    bool normalized = false;
  } mb;
  manifold_build->add_option("--kernels", mb.kernels, "kernel files (>= 2)")
      ->required()
      ->expected(-2);
  manifold_build->add_option("--dim", mb.dim, "embedding dimension (0 = scree elbow)");
  manifold_build->add_flag("--normalized", mb.normalized,
                           "divide distances by the smaller embedding norm");
  manifold_build->add_option("--mds-dim", mb.mds_dim, "manifold dimension");
  manifold_build->add_option("--reference", mb.reference,
                             "labeled CSV of reference coordinates to Procrustes-align against");
  manifold_build->add_option("-o,--output", mb.out, "output bundle path")->required();
  manifold_build->callback([&] {
    dk::set_thread_count(threads);
    std::vector<dk::DataKernel> kernels;
    kernels.reserve(mb.kernels.size());
    for (const auto& path : mb.kernels) kernels.push_back(dk::read_kernel(path));

    dk::ManifoldOptions opts;
    opts.dim = mb.dim;
    opts.normalized = mb.normalized;
    dk::ManifoldBundle bundle;
    bundle.distances = dk::pairwise_distances(kernels, opts);
    bundle.distances.model_labels = labels_from_paths(mb.kernels);
    bundle.manifold = dk::classical_mds(bundle.distances, mb.mds_dim);
    bundle.triangle_violations = dk::triangle_violations(bundle.distances);

    if (!mb.reference.empty()) {
      const auto [ref_labels, ref_coords] = dk::read_labeled_csv(mb.reference);
      const dk::Matrix reference =
          reorder_reference(bundle.distances.model_labels, ref_labels, ref_coords);
      const dk::AlignedManifold aligned = dk::align_manifold(bundle.manifold, reference);
      bundle.has_alignment = true;
      bundle.aligned_coordinates = aligned.coordinates;
      bundle.procrustes_residual = aligned.residual;
    }

    bundle.config = {{"command", "manifold build"},
                     {"kernels", mb.kernels},
                     {"dim", bundle.distances.dim},
                     {"normalized", mb.normalized},
                     {"mds_dim", mb.mds_dim},
                     {"reference", mb.reference.empty() ? nlohmann::json() : nlohmann::json(mb.reference)},
                     {"threads", threads}};
    dk::write_bundle(bundle, mb.out);
  });

  // ---- synth --------------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth", "synthetic data generators");
  synth_cmd->require_subcommand(1);

  auto* synth_emb = synth_cmd->add_subcommand("embeddings", "generate a synthetic model's embeddings");
  struct {
    std::string spec, out;
  } se;
  synth_emb->add_option("--spec", se.spec, "model spec JSON")->required();
  synth_emb->add_option("-o,--output", se.out, "output matrix path")->required();
  synth_emb->callback([&] {
    dk::set_thread_count(threads);
    const dk::SyntheticModelSpec spec = dk::read_model_spec(se.spec);
    dk::write_matrix(dk::generate_embeddings(spec), se.out);
    // Config echo beside the binary matrix (which has no echo slot itself).
    std::filesystem::path echo_path(se.out);
    echo_path.replace_extension(".json");
    if (echo_path.string() != se.out) {
      const nlohmann::json echo = {{"command", "synth embeddings"}, {"spec", se.spec},
                                   {"output", se.out}, {"threads", threads}};
      write_json_file(echo, echo_path.string());
    }
  });

  auto* synth_rdpg = synth_cmd->add_subcommand("rdpg", "sample a graph from latent positions");
  struct {
    std::string latent, format = "bin", out;
    std::uint64_t seed = 0;
  } sr;
  synth_rdpg->add_option("--latent", sr.latent, "latent position matrix file")->required();
  synth_rdpg->add_option("--format", sr.format, "latent file format")
      ->check(CLI::IsMember({"bin", "csv"}));
  synth_rdpg->add_option("--seed", sr.seed, "RNG seed")->required();
  synth_rdpg->add_option("-o,--output", sr.out, "output graph path (edge-list format)")->required();
  synth_rdpg->callback([&] {
    dk::set_thread_count(threads);
    const dk::EmbeddingMatrix emb = load_embeddings(sr.latent, sr.format);
    dk::RdpgParams params;
    params.latent.values = emb.values;
    params.latent.source = sr.latent;
    dk::DataKernel graph;
    graph.adjacency = dk::sample_rdpg(params, sr.seed);
    graph.k = 0;  // not a k-NN graph
    graph.rule = dk::Symmetrization::Max;
    graph.ids = emb.ids;
    const nlohmann::json echo = {{"command", "synth rdpg"},
                                 {"latent", sr.latent},
                                 {"format", sr.format},
                                 {"seed", sr.seed},
                                 {"threads", threads}};
    dk::write_kernel(graph, sr.out, echo);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const dk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const dk::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const dk::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
