#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gwnet/error.hpp"
#include "gwnet/gw.hpp"
#include "gwnet/invariants.hpp"
#include "gwnet/network.hpp"
#include "gwnet/parallel.hpp"

namespace gwnet {

enum class DissimilarityMethod { kRtlbMax, kRflb, kRslb, kSzlb, kEntropicGw };

/// "rtlb_max", "rflb", "rslb", "szlb", "entropic_gw"; InvalidArgument otherwise.
DissimilarityMethod parse_method(std::string_view name);
std::string_view to_string(DissimilarityMethod method) noexcept;

struct PairFailure {
  std::size_t i;
  std::size_t j;
  ErrorCode code;
  std::string message;
};

struct DissimilarityMatrix {
  std::vector<std::string> labels;
  Matrix values;  // NaN where the pair failed
  std::vector<PairFailure> failures;

  std::size_t size() const noexcept { return labels.size(); }
  bool complete() const noexcept { return failures.empty(); }
};

struct DissimilarityOptions {
  DissimilarityMethod method = DissimilarityMethod::kRtlbMax;
  double p = 2.0;
  GwOptions gw;  // entropic_gw only (p is fixed at 2 there)
  unsigned workers = worker_count();
};

/// Evaluates every unordered pair once. rflb uses max(out, in); entropic_gw
/// reports ½ dis_2 of its coupling. A pair that throws is left NaN and
/// recorded in `failures`. Labels default to "0", "1", ...
DissimilarityMatrix dissimilarity_matrix(const std::vector<MeasureNetwork>& networks,
                                         const DissimilarityOptions& options = {},
                                         std::vector<std::string> labels = {});

/// Throws InvalidArgument unless D is square, finite, nonnegative, symmetric
/// within 1e-9 and zero on the diagonal.
void validate_dissimilarity(const DissimilarityMatrix& D);

struct Merge {
  std::size_t a;  // cluster ids: leaves are 0..k-1, merge s creates k+s
  std::size_t b;
  double height;
  std::size_t size;
};

struct Dendrogram {
  std::vector<std::string> leaf_labels;
  std::vector<Merge> merges;
};

/// Minimum-spanning-tree single linkage; equal heights merge in order of
/// the lowest (i, j) leaf index pair.
Dendrogram single_linkage(const DissimilarityMatrix& D);

/// Newick string with branch lengths, terminated by ';'.
std::string to_newick(const Dendrogram& dendrogram);

enum class MeasureMode { kUniform, kLastRow, kAuto };

/// Numeric CSV matrix. Lines starting with '#' are comments; in kAuto mode a
/// "# measure: last-row" comment switches to kLastRow, where the final row
/// holds the node masses. Throws NonSquare or ParseError (with row/column).
MeasureNetwork ingest_matrix_csv(const std::filesystem::path& path,
                                 MeasureMode mode = MeasureMode::kAuto);
MeasureNetwork parse_matrix_csv(std::string_view text, MeasureMode mode = MeasureMode::kAuto);

/// Matrix CSV readable by ingest_matrix_csv; with_measure appends the
/// measure row and the flagging header.
std::string network_to_csv(const MeasureNetwork& X, bool with_measure);

/// Labeled CSV: header ",l1,...,lk", then one "li,v..." row per label.
std::string dissimilarity_to_csv(const DissimilarityMatrix& D);
/// Accepts the labeled form above or a bare square numeric matrix.
DissimilarityMatrix parse_dissimilarity_csv(std::string_view text);
DissimilarityMatrix read_dissimilarity_csv(const std::filesystem::path& path);

/// merges CSV "a,b,height,size".
std::string merges_to_csv(const Dendrogram& dendrogram);

using NamedCurve = std::pair<std::string, SizeCurve>;

/// Writes dissimilarity.csv, dendrogram.nwk, merges.csv, failures.csv (only
/// when some pair failed) and curve_<name>.csv per curve. Output bytes
/// depend only on the inputs. Throws IoError.
void emit_outputs(const DissimilarityMatrix& D, const Dendrogram& dendrogram,
                  const std::filesystem::path& out_dir,
                  const std::vector<NamedCurve>& curves = {});

}  // namespace gwnet
