#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mastlab/rng.hpp"

namespace mastlab {

// Word over {1, 2, 3}; the empty word is the root of the ternary tree.
class TernaryWord {
 public:
  TernaryWord() = default;
  explicit TernaryWord(std::vector<std::uint8_t> letters);
  static TernaryWord parse(std::string_view text);  // "", "132", ...

  std::size_t depth() const noexcept { return letters_.size(); }
  int operator[](std::size_t i) const { return letters_[i]; }  // 0-based
  std::span<const std::uint8_t> letters() const noexcept { return letters_; }

  TernaryWord child(int letter) const;
  TernaryWord prefix(std::size_t length) const;
  void push_back(int letter);

  // Rank among the 3^depth words of the same depth (letters as base-3
  // digits, most significant first).
  std::uint64_t rank() const;
  std::string str() const;

  friend bool operator==(const TernaryWord&, const TernaryWord&) = default;

 private:
  std::vector<std::uint8_t> letters_;
};

using Split = std::array<double, 3>;

// Read access to the masses |R[i]| of a (possibly lazily generated) mass
// cascade. ratios(i) is the relative split of R[i] into R[i1], R[i2], R[i3].
class CascadeView {
 public:
  virtual ~CascadeView() = default;
  // Deepest word with defined mass; nullopt when unbounded.
  virtual std::optional<std::size_t> max_depth() const = 0;
  virtual double root_mass() const = 0;
  virtual Split ratios(const TernaryWord& parent) const = 0;
  // Default: root mass times the ratios along the word, in log space.
  virtual double log_mass(const TernaryWord& word) const;
  double mass(const TernaryWord& word) const;
};

// Fully materialized cascade, all 3^j masses for every depth j <= depth.
class MassCascade final : public CascadeView {
 public:
  static constexpr std::size_t kMaxDepth = 14;

  // levels[j] holds the 3^j masses of depth j in rank order. Validates
  // positivity and that children sum to their parent within 1e-12.
  static MassCascade from_levels(std::vector<std::vector<double>> levels);

  std::size_t depth() const noexcept { return levels_.size() - 1; }
  std::span<const double> level(std::size_t j) const { return levels_[j]; }

  std::optional<std::size_t> max_depth() const override { return depth(); }
  double root_mass() const override { return levels_[0][0]; }
  Split ratios(const TernaryWord& parent) const override;
  double log_mass(const TernaryWord& word) const override;

 private:
  explicit MassCascade(std::vector<std::vector<double>> levels)
      : levels_(std::move(levels)) {}
  std::vector<std::vector<double>> levels_;
};

// i.i.d. Dir(1/2, 1/2, 1/2) splits at every word, depth 0 <= k <= 14.
MassCascade build_cascade(std::size_t k, Rng& rng);

// Unbounded cascade whose split at word i is drawn from a stream seeded by
// hashing (seed, i). Pure: the same word always yields the same split, so
// independent paths through one cascade need no shared state.
class HashedCascade final : public CascadeView {
 public:
  explicit HashedCascade(std::uint64_t seed) : seed_(seed) {}
  std::optional<std::size_t> max_depth() const override {
    return std::nullopt;
  }
  double root_mass() const override { return 1.0; }
  Split ratios(const TernaryWord& parent) const override;

 private:
  std::uint64_t seed_;
};

// Split and chosen letter (1..3) at one scale of the decomposition around a
// uniform point.
struct ZoomRecord {
  Split w;
  int letter;
};

struct ZoomTrace {
  std::vector<ZoomRecord> records;  // records[j-1] is scale j
  TernaryWord path;                 // path[j-1] == records[j-1].letter
};

// k i.i.d. records: a Dir(1/2,1/2,1/2) split plus a size-biased letter.
ZoomTrace zoom_trace(std::size_t k, Rng& rng);

// Scales 1 <= j <= k-1 that are alpha-good: j odd, letters j and j+1 equal
// to 3, and every child ratio of the split of R[i_j] (record j+1) >= alpha.
std::vector<std::size_t> good_scales(const ZoomTrace& trace, double alpha);

// Word of the given depth reached by descending through `c`, choosing each
// child with probability equal to its relative mass.
TernaryWord sample_size_biased_path(const CascadeView& c, std::size_t depth,
                                    Rng& rng);

// Per depth j = 0..depth: (min, max) of log |R[i]| over words of depth j.
std::vector<std::pair<double, double>> brw_envelope(const MassCascade& c);

// One JSON object per word: {"word":"132","mass":...}.
void write_cascade_jsonl(const MassCascade& c, std::ostream& out);

}  // namespace mastlab
