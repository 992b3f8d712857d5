// Copyright 2026 The netlang Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Symbolic objects and referential game rounds.

#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "netlang/random.hpp"

namespace netlang {

// An object described by its three factors of variation.
struct ObjectSpec {
  std::size_t shape = 0;
  std::size_t object_color = 0;
  std::size_t floor_color = 0;

  bool operator==(const ObjectSpec&) const = default;
};

struct FactorCardinalities {
  std::size_t shapes = 5;
  std::size_t object_colors = 8;
  std::size_t floor_colors = 5;

  std::size_t total() const { return shapes + object_colors + floor_colors; }
  std::size_t combinations() const { return shapes * object_colors * floor_colors; }
  bool contains(const ObjectSpec& o) const {
    return o.shape < shapes && o.object_color < object_colors && o.floor_color < floor_colors;
  }
  bool operator==(const FactorCardinalities&) const = default;
};

struct DatasetConfig {
  FactorCardinalities factors;
  std::size_t train_size = 4000;
  std::size_t test_size = 1000;
};

struct Dataset {
  FactorCardinalities factors;
  std::vector<ObjectSpec> train;
  std::vector<ObjectSpec> test;

  bool operator==(const Dataset&) const = default;
};

enum class Split { Train, Test };

inline ObjectSpec sample_object(const FactorCardinalities& f, Rng& rng) {
  ObjectSpec o;
  o.shape = uniform_index(rng, f.shapes);
  o.object_color = uniform_index(rng, f.object_colors);
  o.floor_color = uniform_index(rng, f.floor_colors);
  return o;
}

// Both splits are i.i.d. uniform over the factor product, with replacement.
inline Dataset generate_dataset(const DatasetConfig& cfg, Rng& rng) {
  const auto& f = cfg.factors;
  if (f.shapes < 2 || f.object_colors < 2 || f.floor_colors < 2)
    throw ConfigError("generate_dataset: every factor needs cardinality >= 2");
  Dataset d;
  d.factors = f;
  d.train.reserve(cfg.train_size);
  d.test.reserve(cfg.test_size);
  for (std::size_t i = 0; i < cfg.train_size; ++i) d.train.push_back(sample_object(f, rng));
  for (std::size_t i = 0; i < cfg.test_size; ++i) d.test.push_back(sample_object(f, rng));
  return d;
}

struct GameInstance {
  std::vector<ObjectSpec> candidates;
  std::size_t target_index = 0;

  const ObjectSpec& target() const { return candidates[target_index]; }
};

inline constexpr std::size_t kMaxDistractorAttempts = 1000;

// Draws x_size candidates from one split and a uniform target position.
// Distractors identical to the target are redrawn.
inline GameInstance sample_game(const Dataset& data, Split split, std::size_t x_size, Rng& rng) {
  const auto& pool = split == Split::Train ? data.train : data.test;
  if (pool.empty()) throw ConfigError("sample_game: dataset split is empty");
  if (x_size < 2) throw ConfigError("sample_game: need at least 2 candidates");
  GameInstance g;
  g.candidates.resize(x_size);
  g.target_index = uniform_index(rng, x_size);
  const ObjectSpec target = pool[uniform_index(rng, pool.size())];
  for (std::size_t i = 0; i < x_size; ++i) {
    if (i == g.target_index) {
      g.candidates[i] = target;
      continue;
    }
    std::size_t attempts = 0;
    ObjectSpec o;
    do {
      if (attempts++ == kMaxDistractorAttempts)
        throw ConfigError("sample_game: could not find a distractor distinct from the target");
      o = pool[uniform_index(rng, pool.size())];
    } while (o == target);
    g.candidates[i] = o;
  }
  return g;
}

inline int reward(std::size_t predicted, std::size_t target) { return predicted == target ? 1 : 0; }

// One "split shape color floor" line per object, train split first.
inline void write_dataset(std::ostream& os, const Dataset& d) {
  for (const auto& o : d.train)
    os << "train " << o.shape << ' ' << o.object_color << ' ' << o.floor_color << '\n';
  for (const auto& o : d.test)
    os << "test " << o.shape << ' ' << o.object_color << ' ' << o.floor_color << '\n';
}

inline Dataset read_dataset(std::istream& is, const FactorCardinalities& factors) {
  Dataset d;
  d.factors = factors;
  std::string split;
  ObjectSpec o;
  while (is >> split >> o.shape >> o.object_color >> o.floor_color) {
    if (!factors.contains(o)) throw ConfigError("read_dataset: factor index out of range");
    if (split == "train")
      d.train.push_back(o);
    else if (split == "test")
      d.test.push_back(o);
    else
      throw ConfigError("read_dataset: unknown split '" + split + "'");
  }
  if (!is.eof()) throw ConfigError("read_dataset: malformed line");
  return d;
}

}  // namespace netlang
