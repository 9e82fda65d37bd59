#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gwnet/gwnet.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kInputError = 2;
constexpr Eigen::Index kMaxNodes = 1000;

struct Input {
  std::string label;
  gwnet::MeasureNetwork network;
};

gwnet::MeasureNetwork load_network(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return gwnet::ingest_matrix_csv(path);
  return gwnet::read_network(path);
}

// Files are taken as given; directories contribute their .json and .csv
// files in name order.
std::vector<Input> load_inputs(const std::vector<std::string>& args) {
  std::vector<fs::path> files;
  for (const auto& arg : args) {
    const fs::path p(arg);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".json" || ext == ".csv")) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::vector<Input> inputs;
  for (const auto& f : files) inputs.push_back({f.stem().string(), load_network(f)});
  return inputs;
}

int run_generate(const std::string& preset, const std::string& spec_path, int per_class,
                 std::uint64_t seed, bool normalize, const fs::path& out) {
  std::vector<gwnet::SbmSpec> specs;
  if (!spec_path.empty()) {
    specs.push_back(gwnet::sbm_spec_from_json(gwnet::read_text(spec_path)));
  } else {
    specs = gwnet::experiment_preset(preset);
  }
  for (auto& item : gwnet::sample_collection(specs, per_class, seed)) {
    auto net = normalize ? gwnet::normalize_max_abs(item.network) : item.network;
    gwnet::write_network(net, out / (item.label + ".json"));
  }
  std::cout << "wrote " << specs.size() * static_cast<std::size_t>(per_class)
            << " networks to " << out.string() << "\n";
  return kOk;
}

int run_compare(const std::vector<std::string>& args, const std::string& method, double p,
                const fs::path& out, double lambda, int outer_iters) {
  auto inputs = load_inputs(args);
  if (inputs.size() < 2) {
    std::cerr << "compare needs at least two networks\n";
    return kInputError;
  }
  for (const auto& in : inputs) {
    if (in.network.size() > kMaxNodes) {
      std::cerr << in.label << " has " << in.network.size() << " nodes; networks above "
                << kMaxNodes << " nodes are rejected, subsample it first\n";
      return kInputError;
    }
  }
  gwnet::DissimilarityOptions options;
  options.method = gwnet::parse_method(method);
  options.p = p;
  options.gw.sinkhorn.lambda = lambda;
  options.gw.outer_iters = outer_iters;

  std::vector<gwnet::MeasureNetwork> networks;
  std::vector<std::string> labels;
  for (auto& in : inputs) {
    networks.push_back(std::move(in.network));
    labels.push_back(std::move(in.label));
  }
  const auto D = gwnet::dissimilarity_matrix(networks, options, labels);
  gwnet::write_text(out / "dissimilarity.csv", gwnet::dissimilarity_to_csv(D));

  nlohmann::json report = {{"method", std::string(gwnet::to_string(options.method))},
                           {"p", p},
                           {"labels", D.labels},
                           {"workers", options.workers}};
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : D.failures) {
    failures.push_back({{"i", f.i},
                        {"j", f.j},
                        {"error", std::string(gwnet::to_string(f.code))},
                        {"message", f.message}});
  }
  report["failures"] = failures;
  if (networks.size() == 2 && options.method != gwnet::DissimilarityMethod::kEntropicGw) {
    report["bounds"] =
        nlohmann::json::parse(gwnet::bound_report_to_json(gwnet::rtlb_max(networks[0], networks[1], p)));
  }
  gwnet::write_text(out / "report.json", report.dump(2) + "\n");

  std::cout << gwnet::dissimilarity_to_csv(D);
  if (!D.complete()) {
    std::cerr << D.failures.size() << " pair(s) failed; see report.json\n";
    return kPartial;
  }
  return kOk;
}

int run_cluster(const std::string& path, const fs::path& out) {
  const auto D = gwnet::read_dissimilarity_csv(path);
  const auto dendrogram = gwnet::single_linkage(D);
  const std::string newick = gwnet::to_newick(dendrogram);
  gwnet::write_text(out / "dendrogram.nwk", newick + "\n");
  gwnet::write_text(out / "merges.csv", gwnet::merges_to_csv(dendrogram));
  std::cout << newick << "\n";
  return kOk;
}

int run_invariant(const std::string& path, const std::string& kind, double p, int grid,
                  const std::string& out) {
  const auto X = load_network(path);
  std::string text;
  if (kind == "size") {
    text = "p,size\n" + gwnet::format_double(p) + "," + gwnet::format_double(gwnet::size_p(X, p)) + "\n";
  } else if (kind == "subsize") {
    const double top = X.weights().maxCoeff();
    const double bottom = std::min(0.0, X.weights().minCoeff());
    const auto curve = gwnet::size_curve(X, p, gwnet::LevelKind::kSublevel,
                                         gwnet::uniform_grid(bottom, std::max(top, bottom + 1e-12), grid));
    text = gwnet::size_curve_csv(curve);
  } else if (kind == "ecc") {
    const auto e_out = gwnet::eccentricity(X, p, gwnet::Direction::kOut);
    const auto e_in = gwnet::eccentricity(X, p, gwnet::Direction::kIn);
    text = "node,out,in\n";
    for (Eigen::Index i = 0; i < X.size(); ++i) {
      const std::string name = X.labels().empty() ? std::to_string(i) : X.labels()[i];
      text += name + "," + gwnet::format_double(e_out.values(i)) + "," +
              gwnet::format_double(e_in.values(i)) + "\n";
    }
  } else {
    std::cerr << "unknown invariant kind '" << kind << "'\n";
    return kInputError;
  }
  if (out.empty()) {
    std::cout << text;
  } else {
    gwnet::write_text(out, text);
  }
  return kOk;
}

int run_sphere_bound(int n1, int n2, double p, int samples, double tolerance) {
  const auto f = gwnet::sphere_size_curve(n1, p, samples);
  const auto g = gwnet::sphere_size_curve(n2, p, samples);
  const double eps = gwnet::interleaving_distance(f, g, {tolerance});
  std::cout << "interleaving distance between sub-size curves of S^" << n1 << " and S^" << n2
            << " (p=" << p << "): " << gwnet::format_double(eps) << "\n";
  std::cout << "lower bound on d_N,p: " << gwnet::format_double(eps / 2.0) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distances, lower bounds and invariants for measure networks"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "Sample SBM networks as JSON files");
  std::string preset = "table1", spec_path;
  int per_class = 10;
  std::uint64_t seed = 0;
  bool normalize = false;
  std::string gen_out = "networks";
  generate->add_option("--preset", preset, "table1 or table3");
  generate->add_option("--spec", spec_path, "SBM spec JSON (overrides --preset)");
  generate->add_option("--per-class", per_class, "networks per class")->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed);
  generate->add_flag("--normalize", normalize, "divide weights by max |w|");
  generate->add_option("--out", gen_out, "output directory");

  auto* compare = app.add_subcommand("compare", "Dissimilarity matrix over networks");
  std::vector<std::string> inputs;
  std::string method = "rtlb_max";
  double p = 2.0;
  double lambda = 1.0;
  int outer_iters = 200;
  std::string cmp_out = ".";
  compare->add_option("inputs", inputs, "network JSON/CSV files or directories")->required();
  compare->add_option("--method", method, "rtlb_max | rflb | rslb | szlb | entropic_gw");
  compare->add_option("--p", p, "order p >= 1");
  compare->add_option("--lambda", lambda, "Sinkhorn regularization for entropic_gw");
  compare->add_option("--outer-iters", outer_iters, "entropic_gw outer iterations")
      ->check(CLI::PositiveNumber);
  compare->add_option("--out", cmp_out, "output directory");

  auto* cluster = app.add_subcommand("cluster", "Single linkage over a dissimilarity CSV");
  std::string dis_path, cl_out = ".";
  cluster->add_option("matrix", dis_path, "dissimilarity CSV")->required()->check(CLI::ExistingFile);
  cluster->add_option("--out", cl_out, "output directory");

  auto* invariant = app.add_subcommand("invariant", "Network invariants as CSV");
  std::string net_path, kind = "size", inv_out;
  double inv_p = 2.0;
  int grid = 512;
  invariant->add_option("network", net_path, "network JSON or CSV")->required()->check(CLI::ExistingFile);
  invariant->add_option("--kind", kind, "size | subsize | ecc");
  invariant->add_option("--p", inv_p);
  invariant->add_option("--grid", grid, "threshold samples for subsize")->check(CLI::Range(2, 1 << 20));
  invariant->add_option("--out", inv_out, "output file (stdout if omitted)");

  auto* sphere = app.add_subcommand("sphere-bound", "Interleaving bound between two spheres");
  int n1 = 1, n2 = 2, samples = 512;
  double sp_p = 1.0, tolerance = 1e-4;
  sphere->add_option("--n1", n1)->check(CLI::Range(1, 16));
  sphere->add_option("--n2", n2)->check(CLI::Range(1, 16));
  sphere->add_option("--p", sp_p);
  sphere->add_option("--samples", samples)->check(CLI::Range(2, 1 << 20));
  sphere->add_option("--tolerance", tolerance)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*generate) return run_generate(preset, spec_path, per_class, seed, normalize, gen_out);
    if (*compare) return run_compare(inputs, method, p, cmp_out, lambda, outer_iters);
    if (*cluster) return run_cluster(dis_path, cl_out);
    if (*invariant) return run_invariant(net_path, kind, inv_p, grid, inv_out);
    if (*sphere) return run_sphere_bound(n1, n2, sp_p, samples, tolerance);
  } catch (const gwnet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
