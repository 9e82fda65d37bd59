#include "gwnet/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numeric>
#include <tuple>

#include "gwnet/io.hpp"
#include "gwnet/lower_bounds.hpp"

namespace gwnet {

namespace {

double evaluate_pair(const MeasureNetwork& X, const MeasureNetwork& Y,
                     const DissimilarityOptions& options) {
  switch (options.method) {
    case DissimilarityMethod::kRtlbMax:
      return rtlb_max(X, Y, options.p).rtlb_max;
    case DissimilarityMethod::kRflb:
      return std::max(rflb(X, Y, options.p, Direction::kOut),
                      rflb(X, Y, options.p, Direction::kIn));
    case DissimilarityMethod::kRslb:
      return rslb(X, Y, options.p);
    case DissimilarityMethod::kSzlb:
      return szlb(X, Y, options.p);
    case DissimilarityMethod::kEntropicGw:
      return entropic_gw(X, Y, options.gw).value;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown dissimilarity method");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

bool parse_number(std::string_view field, double& value) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

[[noreturn]] void parse_failure(std::size_t line, std::size_t column, std::string_view field) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ", column " +
                                          std::to_string(column) + ": cannot parse '" +
                                          std::string(trim(field)) + "' as a number");
}

bool is_measure_header(std::string_view comment) {
  std::string lowered;
  for (const char c : comment) {
    if (c != ' ' && c != '\t' && c != '#' && c != '\r') {
      lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return lowered == "measure:last-row";
}

std::string newick_label(const std::string& label) {
  if (label.find_first_of("()[]':;, \t\n") == std::string::npos && !label.empty()) return label;
  std::string out = "'";
  for (const char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

}  // namespace

DissimilarityMethod parse_method(std::string_view name) {
  if (name == "rtlb_max") return DissimilarityMethod::kRtlbMax;
  if (name == "rflb") return DissimilarityMethod::kRflb;
  if (name == "rslb") return DissimilarityMethod::kRslb;
  if (name == "szlb") return DissimilarityMethod::kSzlb;
  if (name == "entropic_gw") return DissimilarityMethod::kEntropicGw;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(DissimilarityMethod method) noexcept {
  switch (method) {
    case DissimilarityMethod::kRtlbMax: return "rtlb_max";
    case DissimilarityMethod::kRflb: return "rflb";
    case DissimilarityMethod::kRslb: return "rslb";
    case DissimilarityMethod::kSzlb: return "szlb";
    case DissimilarityMethod::kEntropicGw: return "entropic_gw";
  }
  return "unknown";
}

DissimilarityMatrix dissimilarity_matrix(const std::vector<MeasureNetwork>& networks,
                                         const DissimilarityOptions& options,
                                         std::vector<std::string> labels) {
  const std::size_t k = networks.size();
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two networks");
  if (labels.empty()) {
    for (std::size_t i = 0; i < k; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != k) throw Error(ErrorCode::kSizeMismatch, "one label per network required");
  if (options.method == DissimilarityMethod::kEntropicGw) {
    options.gw.sinkhorn.validate();
  } else {
    check_order(options.p);
    if (std::isinf(options.p)) {
      throw Error(ErrorCode::kInvalidArgument, "lower bounds need a finite order p");
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }

  DissimilarityMatrix D{std::move(labels), Matrix::Zero(static_cast<Eigen::Index>(k),
                                                         static_cast<Eigen::Index>(k)),
                        {}};
  std::mutex failures_mutex;
  parallel_for(
      pairs.size(),
      [&](std::size_t s) {
        const auto [i, j] = pairs[s];
        double value = std::numeric_limits<double>::quiet_NaN();
        try {
          value = evaluate_pair(networks[i], networks[j], options);
        } catch (const Error& e) {
          const std::lock_guard lock(failures_mutex);
          D.failures.push_back({i, j, e.code(), e.what()});
        } catch (const std::exception& e) {
          const std::lock_guard lock(failures_mutex);
          D.failures.push_back({i, j, ErrorCode::kInvalidArgument, e.what()});
        }
        D.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
        D.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
      },
      options.workers);
  std::sort(D.failures.begin(), D.failures.end(),
            [](const PairFailure& a, const PairFailure& b) {
              return std::tie(a.i, a.j) < std::tie(b.i, b.j);
            });
  return D;
}

void validate_dissimilarity(const DissimilarityMatrix& D) {
  const auto k = static_cast<Eigen::Index>(D.labels.size());
  if (D.values.rows() != k || D.values.cols() != k) {
    throw Error(ErrorCode::kInvalidArgument, "dissimilarity matrix must be k x k for k labels");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (D.values(i, i) != 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "dissimilarity diagonal must be zero");
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      const double v = D.values(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is negative or missing");
      }
      if (std::abs(v - D.values(j, i)) > 1e-9) {
        throw Error(ErrorCode::kInvalidArgument, "dissimilarity matrix is not symmetric");
      }
    }
  }
}

Dendrogram single_linkage(const DissimilarityMatrix& D) {
  validate_dissimilarity(D);
  const std::size_t k = D.labels.size();
  struct Edge {
    double height;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  edges.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double h = 0.5 * (D.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                              D.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
      edges.push_back({h, i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.height, a.i, a.j) < std::tie(b.height, b.i, b.j);
  });

  std::vector<std::size_t> parent(k), cluster(k), size(k, 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::iota(cluster.begin(), cluster.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  Dendrogram out{D.labels, {}};
  out.merges.reserve(k > 0 ? k - 1 : 0);
  for (const Edge& e : edges) {
    const std::size_t ri = find(e.i), rj = find(e.j);
    if (ri == rj) continue;
    const std::size_t a = std::min(cluster[ri], cluster[rj]);
    const std::size_t b = std::max(cluster[ri], cluster[rj]);
    parent[rj] = ri;
    size[ri] += size[rj];
    cluster[ri] = k + out.merges.size();
    out.merges.push_back({a, b, e.height, size[ri]});
    if (out.merges.size() + 1 == k) break;
  }
  return out;
}

std::string to_newick(const Dendrogram& dendrogram) {
  const std::size_t k = dendrogram.leaf_labels.size();
  if (k == 0) return ";";
  const auto height_of = [&](std::size_t id) {
    return id < k ? 0.0 : dendrogram.merges[id - k].height;
  };
  // Iterative post-order build avoids deep recursion on chain-shaped trees.
  std::vector<std::string> text(k + dendrogram.merges.size());
  for (std::size_t i = 0; i < k; ++i) text[i] = newick_label(dendrogram.leaf_labels[i]);
  for (std::size_t s = 0; s < dendrogram.merges.size(); ++s) {
    const Merge& m = dendrogram.merges[s];
    text[k + s] = "(" + text[m.a] + ":" + format_double(m.height - height_of(m.a)) + "," +
                  text[m.b] + ":" + format_double(m.height - height_of(m.b)) + ")";
    text[m.a].clear();
    text[m.b].clear();
  }
  return (dendrogram.merges.empty() ? text[0] : text.back()) + ";";
}

MeasureNetwork parse_matrix_csv(std::string_view text, MeasureMode mode) {
  bool last_row = mode == MeasureMode::kLastRow;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_of_row;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = trim(lines[n]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (mode == MeasureMode::kAuto && is_measure_header(line)) last_row = true;
      continue;
    }
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_number(fields[c], row[c])) parse_failure(n + 1, c + 1, fields[c]);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(n + 1) + ": expected " +
                      std::to_string(rows.front().size()) + " columns, found " +
                      std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
    line_of_row.push_back(n + 1);
  }
  if (rows.empty()) throw Error(ErrorCode::kParseError, "no data rows");

  const std::size_t cols = rows.front().size();
  const std::size_t weight_rows = last_row ? rows.size() - 1 : rows.size();
  if (weight_rows != cols) {
    throw Error(ErrorCode::kNonSquare,
                std::to_string(weight_rows) + " weight rows but " + std::to_string(cols) +
                    " columns" + (last_row ? " (after removing the measure row)" : ""));
  }
  Matrix w(static_cast<Eigen::Index>(cols), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (!last_row) return MeasureNetwork::with_uniform_measure(std::move(w));
  Vector mu = Eigen::Map<const Vector>(rows.back().data(), static_cast<Eigen::Index>(cols));
  return MeasureNetwork(std::move(w), std::move(mu));
}

MeasureNetwork ingest_matrix_csv(const std::filesystem::path& path, MeasureMode mode) {
  const std::string text = read_text(path);
  try {
    return parse_matrix_csv(text, mode);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string network_to_csv(const MeasureNetwork& X, bool with_measure) {
  std::string out;
  if (with_measure) out += "# measure: last-row\n";
  const auto append_row = [&out](const auto& row) {
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      if (j > 0) out += ',';
      out += format_double(row(j));
    }
    out += '\n';
  };
  for (Eigen::Index i = 0; i < X.size(); ++i) append_row(X.weights().row(i));
  if (with_measure) append_row(X.measure().transpose());
  return out;
}

std::string dissimilarity_to_csv(const DissimilarityMatrix& D) {
  std::string out;
  for (const auto& label : D.labels) out += "," + quote_field(label);
  out += '\n';
  for (std::size_t i = 0; i < D.labels.size(); ++i) {
    out += quote_field(D.labels[i]);
    for (std::size_t j = 0; j < D.labels.size(); ++j) {
      out += ',';
      out += format_double(D.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out += '\n';
  }
  return out;
}

DissimilarityMatrix parse_dissimilarity_csv(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    records.emplace_back(n + 1, split_fields(line));
  }
  if (records.empty()) throw Error(ErrorCode::kParseError, "no data rows");

  const auto& head = records.front().second;
  const bool labeled = trim(head.front()).empty();
  DissimilarityMatrix D;
  std::size_t first = 0, offset = 0;
  if (labeled) {
    for (std::size_t c = 1; c < head.size(); ++c) D.labels.emplace_back(trim(head[c]));
    first = 1;
    offset = 1;
  } else {
    for (std::size_t c = 0; c < head.size(); ++c) D.labels.push_back(std::to_string(c));
  }
  const std::size_t k = D.labels.size();
  if (records.size() - first != k) {
    throw Error(ErrorCode::kNonSquare, std::to_string(records.size() - first) + " rows but " +
                                           std::to_string(k) + " columns");
  }
  D.values.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < k; ++r) {
    const auto& [line, fields] = records[first + r];
    if (fields.size() != k + offset) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": expected " +
                                              std::to_string(k + offset) + " fields");
    }
    for (std::size_t c = 0; c < k; ++c) {
      double v;
      if (!parse_number(fields[c + offset], v)) parse_failure(line, c + offset + 1, fields[c + offset]);
      D.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return D;
}

DissimilarityMatrix read_dissimilarity_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return parse_dissimilarity_csv(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string merges_to_csv(const Dendrogram& dendrogram) {
  std::string out = "a,b,height,size\n";
  for (const Merge& m : dendrogram.merges) {
    out += std::to_string(m.a) + "," + std::to_string(m.b) + "," + format_double(m.height) + "," +
           std::to_string(m.size) + "\n";
  }
  return out;
}

void emit_outputs(const DissimilarityMatrix& D, const Dendrogram& dendrogram,
                  const std::filesystem::path& out_dir, const std::vector<NamedCurve>& curves) {
  write_text(out_dir / "dissimilarity.csv", dissimilarity_to_csv(D));
  write_text(out_dir / "dendrogram.nwk", to_newick(dendrogram) + "\n");
  write_text(out_dir / "merges.csv", merges_to_csv(dendrogram));
  if (!D.failures.empty()) {
    std::string manifest = "i,j,label_i,label_j,error,message\n";
    for (const auto& f : D.failures) {
      manifest += std::to_string(f.i) + "," + std::to_string(f.j) + "," +
                  quote_field(D.labels[f.i]) + "," + quote_field(D.labels[f.j]) + "," +
                  std::string(to_string(f.code)) + "," + quote_field(f.message) + "\n";
    }
    write_text(out_dir / "failures.csv", manifest);
  }
  for (const auto& [name, curve] : curves) {
    write_text(out_dir / ("curve_" + name + ".csv"), size_curve_csv(curve));
  }
}

}  // namespace gwnet
