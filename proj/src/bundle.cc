// Copyright 2026 The HSBM Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hsbm/bundle.h"

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace hsbm {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kHeaderFile = "header.json";
constexpr const char* kEdgesFile = "edges.tsv";
constexpr const char* kLabelsFile = "labels.txt";
constexpr const char* kFeaturesFile = "features.csv";

void AppendDouble(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

template <typename T>
void AppendInt(std::string& out, T v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Splits on '\n', tolerating a trailing '\r'. The callback receives the
// 1-based line number.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  int64_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    fn(line, line_no);
    pos = end + 1;
  }
}

template <typename T>
T ParseField(std::string_view field, const std::string& file, int64_t line,
             int64_t column) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
  T value{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError(file, line, column,
                     "cannot parse '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

json ParamsToJson(const HsbmParams& p) {
  json mhat = json::array();
  for (Eigen::Index k = 0; k < p.mhat.rows(); ++k) {
    json row = json::array();
    for (Eigen::Index t = 0; t < p.mhat.cols(); ++t) row.push_back(p.mhat(k, t));
    mhat.push_back(row);
  }
  return json{{"n", p.n},
              {"c", p.c},
              {"d", p.d},
              {"eta", p.eta},
              {"mean_scale", p.mean_scale},
              {"sigma", p.sigma},
              {"mhat", mhat},
              {"dbar", p.dbar},
              {"delta", p.delta},
              {"self_loops", p.self_loops}};
}

HsbmParams ParamsFromJson(const json& j) {
  try {
    const int c = j.value("c", 5);
    Matrix mhat;
    if (j.contains("mhat")) {
      const auto& rows = j.at("mhat");
      const int size = static_cast<int>(rows.size());
      mhat.resize(size, size);
      for (int k = 0; k < size; ++k) {
        if (static_cast<int>(rows[k].size()) != size) {
          throw Error(ErrorCode::kShape, "mhat must be square");
        }
        for (int t = 0; t < size; ++t) mhat(k, t) = rows[k][t].get<double>();
      }
    } else {
      mhat = ParsePattern(j.value("pattern", std::string("a=0.25")), c);
    }
    double degree = 25.0;
    if (j.contains("dbar") && j.at("dbar").is_number()) {
      degree = j.at("dbar").get<double>();
    }
    HsbmParams p = HsbmParams::Defaults(mhat, degree);
    if (j.contains("dbar") && j.at("dbar").is_array()) {
      p.dbar = j.at("dbar").get<std::vector<double>>();
    }
    p.n = j.value("n", p.n);
    p.d = j.value("d", p.d);
    if (j.contains("eta")) p.eta = j.at("eta").get<std::vector<double>>();
    p.mean_scale = j.value("mean_scale", p.mean_scale);
    p.sigma = j.value("sigma", p.sigma);
    p.delta = j.value("delta", p.delta);
    p.self_loops = j.value("self_loops", p.self_loops);
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad parameter JSON: ") + e.what());
  }
}

void SaveBundle(const GraphSample& g, const json& provenance,
                const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string());

  const int64_t n = g.num_nodes();
  const int64_t d = g.features.rows() == n ? g.features.cols() : 0;
  json header = {{"format", "hsbm-bundle"},
                 {"version", kBundleVersion},
                 {"n", n},
                 {"c", g.num_classes},
                 {"d", d},
                 {"num_edges", g.num_edges()},
                 {"provenance", provenance}};
  WriteFile(dir / kHeaderFile, header.dump(2) + "\n");

  std::string edges;
  edges.reserve(static_cast<size_t>(g.num_edges()) * 12);
  for (int64_t dst = 0; dst < n; ++dst) {
    for (int32_t src : g.in_neighbors(dst)) {
      AppendInt(edges, src);
      edges.push_back('\t');
      AppendInt(edges, dst);
      edges.push_back('\n');
    }
  }
  WriteFile(dir / kEdgesFile, edges);

  std::string labels;
  for (int32_t y : g.labels) {
    AppendInt(labels, y);
    labels.push_back('\n');
  }
  WriteFile(dir / kLabelsFile, labels);

  if (d > 0) {
    std::string features;
    features.reserve(static_cast<size_t>(n * d * 20));
    for (int64_t i = 0; i < n; ++i) {
      for (int64_t j = 0; j < d; ++j) {
        if (j > 0) features.push_back(',');
        AppendDouble(features, g.features(i, j));
      }
      features.push_back('\n');
    }
    WriteFile(dir / kFeaturesFile, features);
  } else {
    fs::remove(dir / kFeaturesFile, ec);
  }
}

Bundle LoadBundle(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kIo, "no bundle at " + path.string());
  }
  const fs::path dir = fs::is_directory(path) ? path : path.parent_path();
  const fs::path header_path = dir / kHeaderFile;
  Bundle bundle;
  try {
    bundle.header = json::parse(ReadFile(header_path));
  } catch (const json::parse_error& e) {
    throw ParseError(header_path.string(), 0, static_cast<int64_t>(e.byte),
                     e.what());
  }
  const json& h = bundle.header;
  int64_t n = 0, c = 0, d = 0;
  try {
    n = h.at("n").get<int64_t>();
    c = h.at("c").get<int64_t>();
    d = h.value("d", int64_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kShape,
                "header.json is missing n/c/d: " + std::string(e.what()));
  }
  if (n < 0 || c < 1 || d < 0 || n > INT32_MAX) {
    throw Error(ErrorCode::kShape, "header.json has invalid n/c/d");
  }

  const std::string labels_name = (dir / kLabelsFile).string();
  std::vector<int32_t> labels;
  labels.reserve(n);
  ForEachLine(ReadFile(dir / kLabelsFile), [&](std::string_view line,
                                               int64_t no) {
    if (line.empty()) return;
    const auto y = ParseField<int32_t>(line, labels_name, no, 1);
    if (y < 0 || y >= c) {
      throw Error(ErrorCode::kShape, labels_name + ":" + std::to_string(no) +
                                         ": label outside [0, c)");
    }
    labels.push_back(y);
  });
  if (static_cast<int64_t>(labels.size()) != n) {
    throw Error(ErrorCode::kShape, "labels.txt has " +
                                       std::to_string(labels.size()) +
                                       " entries but header says n = " +
                                       std::to_string(n));
  }

  const std::string edges_name = (dir / kEdgesFile).string();
  std::vector<std::pair<int32_t, int32_t>> edges;
  ForEachLine(ReadFile(dir / kEdgesFile), [&](std::string_view line,
                                              int64_t no) {
    if (line.empty()) return;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError(edges_name, no, 1, "expected src<TAB>dst");
    }
    const auto src = ParseField<int64_t>(line.substr(0, tab), edges_name, no, 1);
    const auto dst = ParseField<int64_t>(line.substr(tab + 1), edges_name, no,
                                         static_cast<int64_t>(tab) + 2);
    if (src < 0 || src >= n || dst < 0 || dst >= n) {
      throw Error(ErrorCode::kShape, edges_name + ":" + std::to_string(no) +
                                         ": node index outside [0, n)");
    }
    edges.emplace_back(static_cast<int32_t>(src), static_cast<int32_t>(dst));
  });
  bundle.graph = GraphSample::FromEdges(static_cast<int>(c), std::move(labels),
                                        std::move(edges));

  const fs::path features_path = dir / kFeaturesFile;
  if (d > 0 && fs::exists(features_path)) {
    const std::string features_name = features_path.string();
    Matrix x(n, d);
    int64_t row = 0;
    ForEachLine(ReadFile(features_path), [&](std::string_view line,
                                             int64_t no) {
      if (line.empty()) return;
      if (row >= n) {
        throw Error(ErrorCode::kShape, features_name + " has more than n rows");
      }
      int64_t col = 0;
      size_t pos = 0;
      while (true) {
        const size_t comma = line.find(',', pos);
        const std::string_view cell = line.substr(
            pos, comma == std::string_view::npos ? std::string_view::npos
                                                 : comma - pos);
        if (col >= d) {
          throw Error(ErrorCode::kShape, features_name + ":" +
                                             std::to_string(no) +
                                             ": more than d columns");
        }
        x(row, col) = ParseField<double>(cell, features_name, no, col + 1);
        ++col;
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
      if (col != d) {
        throw Error(ErrorCode::kShape, features_name + ":" +
                                           std::to_string(no) +
                                           ": expected d columns");
      }
      ++row;
    });
    if (row != n) {
      throw Error(ErrorCode::kShape, features_name + " has fewer than n rows");
    }
    bundle.graph.features = std::move(x);
  }
  return bundle;
}

}  // namespace hsbm
