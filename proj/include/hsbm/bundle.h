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

// On-disk graph bundle. A bundle is a directory holding
//
//   header.json   {"format", "version", "n", "c", "d", "num_edges",
//                  "provenance"}
//   edges.tsv     one directed edge "src<TAB>dst" per line (a[dst][src] = 1)
//   labels.txt    one class index per line
//   features.csv  n rows of d comma-separated values (absent when d = 0)
//
// Doubles are written in shortest round-trip form, so save/load is lossless
// and repeated saves of the same graph are byte-identical.

#ifndef HSBM_BUNDLE_H_
#define HSBM_BUNDLE_H_

#include <filesystem>

#include "json.hpp"

#include "hsbm/model.h"

namespace hsbm {

inline constexpr int kBundleVersion = 1;

struct Bundle {
  GraphSample graph;
  nlohmann::json header;
};

nlohmann::json ParamsToJson(const HsbmParams& params);
// Missing keys keep their Defaults() values for the given pattern.
HsbmParams ParamsFromJson(const nlohmann::json& j);

void SaveBundle(const GraphSample& graph, const nlohmann::json& provenance,
                const std::filesystem::path& dir);

// Accepts the bundle directory or the path of its header.json.
Bundle LoadBundle(const std::filesystem::path& path);

}  // namespace hsbm

#endif  // HSBM_BUNDLE_H_
