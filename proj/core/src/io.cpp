#include "gwnet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gwnet/error.hpp"

namespace gwnet {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

Matrix matrix_from(const json& j, const char* field) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::kParseError, std::string(field) + " must be a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kParseError,
                  std::string(field) + " row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) {
        throw Error(ErrorCode::kParseError, std::string(field) + " entry (" + std::to_string(i) +
                                                "," + std::to_string(k) + ") is not a number");
      }
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

Vector vector_from(const json& j, const char* field) {
  if (!j.is_array()) throw Error(ErrorCode::kParseError, std::string(field) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kParseError,
                  std::string(field) + " entry " + std::to_string(i) + " is not a number");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

MeasureNetwork network_from_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.is_object() || !doc.contains("weights")) {
    throw Error(ErrorCode::kParseError, "network JSON needs a \"weights\" field");
  }
  Matrix weights = matrix_from(doc["weights"], "weights");
  std::vector<std::string> labels;
  if (doc.contains("labels") && !doc["labels"].is_null()) {
    try {
      labels = doc["labels"].get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kParseError, "labels must be an array of strings");
    }
  }
  if (doc.contains("measure") && !doc["measure"].is_null()) {
    return MeasureNetwork(std::move(weights), vector_from(doc["measure"], "measure"),
                          std::move(labels));
  }
  return MeasureNetwork::with_uniform_measure(std::move(weights), std::move(labels));
}

std::string network_to_json(const MeasureNetwork& X) {
  json doc;
  doc["labels"] = X.labels();
  json weights = json::array();
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < X.size(); ++k) row.push_back(X.weight(i, k));
    weights.push_back(std::move(row));
  }
  doc["weights"] = std::move(weights);
  doc["measure"] = std::vector<double>(X.measure().begin(), X.measure().end());
  return doc.dump() + "\n";
}

MeasureNetwork read_network(const std::filesystem::path& path) {
  try {
    return network_from_json(read_text(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_network(const MeasureNetwork& X, const std::filesystem::path& path) {
  write_text(path, network_to_json(X));
}

SbmSpec sbm_spec_from_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.is_object() || !doc.contains("means") || !doc.contains("block_sizes")) {
    throw Error(ErrorCode::kParseError, "SBM spec needs \"means\" and \"block_sizes\"");
  }
  SbmSpec spec;
  spec.means = matrix_from(doc["means"], "means");
  const json& var = doc.value("variances", json(5.0));
  if (var.is_number()) {
    spec.variances = Matrix::Constant(spec.means.rows(), spec.means.cols(), var.get<double>());
  } else {
    spec.variances = matrix_from(var, "variances");
  }
  try {
    spec.block_sizes = doc["block_sizes"].get<std::vector<int>>();
    spec.seed = doc.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  spec.validate();
  return spec;
}

std::string bound_report_to_json(const BoundReport& r) {
  json doc = {
      {"order", number(r.order)},       {"szlb", number(r.szlb)},
      {"rflb_out", number(r.rflb_out)}, {"rflb_in", number(r.rflb_in)},
      {"rslb", number(r.rslb)},         {"rtlb_out", number(r.rtlb_out)},
      {"rtlb_in", number(r.rtlb_in)},   {"rtlb_max", number(r.rtlb_max)},
  };
  if (r.tlb_coupling) {
    json plan = json::array();
    const Matrix& m = r.tlb_coupling->plan();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      plan.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
    }
    doc["tlb_coupling"] = std::move(plan);
  }
  return doc.dump(2) + "\n";
}

std::string size_curve_csv(const SizeCurve& curve) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < curve.grid().size(); ++i) {
    out += format_double(curve.grid()[i]);
    out += ',';
    out += format_double(curve.values()[i]);
    out += '\n';
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "failed reading " + path.string());
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

}  // namespace gwnet
