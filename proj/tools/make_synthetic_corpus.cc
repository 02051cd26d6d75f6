// Copyright 2026 The Distillens Authors.
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

// Regenerates the bundled real/distilled toy corpora under data/synthetic.
//
//   make_synthetic_corpus --out-dir data/synthetic [--pairs 400] [--seed 7]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "distillens/corpus_io.h"
#include "synthetic.h"

namespace {

void WriteCorpus(const std::filesystem::path &dir, const std::string &name,
                 const distillens::synthetic::AlignedCorpus &data) {
  std::vector<distillens::Tokens> src, tgt;
  for (const auto &p : data.corpus.pairs) {
    src.push_back(p.source);
    tgt.push_back(p.target);
  }
  std::ofstream s(dir / (name + ".src"));
  distillens::WriteSentences(s, src);
  std::ofstream t(dir / (name + ".tgt"));
  distillens::WriteSentences(t, tgt);
  std::ofstream a(dir / (name + ".aln"));
  distillens::WriteAlignments(a, data.alignments);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Write the bundled synthetic real/distilled corpora"};
  std::string out_dir;
  std::size_t pairs = 400;
  std::uint32_t seed = 7;
  app.add_option("--out-dir", out_dir)->required();
  app.add_option("--pairs", pairs)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  const auto corpora =
      distillens::synthetic::MakeDirectionalCorpora(pairs, seed);
  WriteCorpus(out_dir, "real", corpora.real);
  WriteCorpus(out_dir, "distilled", corpora.distilled);
  return 0;
}
