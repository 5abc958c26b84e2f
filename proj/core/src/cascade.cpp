#include "mastlab/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mastlab/error.hpp"
#include "mastlab/randkit.hpp"

namespace mastlab {

// ---------------------------------------------------------------- words

TernaryWord::TernaryWord(std::vector<std::uint8_t> letters)
    : letters_(std::move(letters)) {
  for (auto l : letters_) {
    if (l < 1 || l > 3) throw DomainError("TernaryWord: letters must be 1..3");
  }
}

TernaryWord TernaryWord::parse(std::string_view text) {
  std::vector<std::uint8_t> letters;
  letters.reserve(text.size());
  for (char c : text) {
    if (c < '1' || c > '3') {
      throw DomainError("TernaryWord: letters must be 1..3");
    }
    letters.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return TernaryWord(std::move(letters));
}

TernaryWord TernaryWord::child(int letter) const {
  TernaryWord w = *this;
  w.push_back(letter);
  return w;
}

TernaryWord TernaryWord::prefix(std::size_t length) const {
  if (length > depth()) throw DomainError("TernaryWord: prefix too long");
  return TernaryWord(std::vector<std::uint8_t>(
      letters_.begin(), letters_.begin() + static_cast<long>(length)));
}

void TernaryWord::push_back(int letter) {
  if (letter < 1 || letter > 3) {
    throw DomainError("TernaryWord: letters must be 1..3");
  }
  letters_.push_back(static_cast<std::uint8_t>(letter));
}

std::uint64_t TernaryWord::rank() const {
  if (depth() > 40) throw DomainError("TernaryWord: rank overflows past depth 40");
  std::uint64_t r = 0;
  for (auto l : letters_) r = 3 * r + (l - 1u);
  return r;
}

std::string TernaryWord::str() const {
  std::string s;
  s.reserve(depth());
  for (auto l : letters_) s.push_back(static_cast<char>('0' + l));
  return s;
}

// ---------------------------------------------------------------- views

double CascadeView::log_mass(const TernaryWord& word) const {
  double acc = std::log(root_mass());
  TernaryWord prefix;
  for (std::size_t j = 0; j < word.depth(); ++j) {
    acc += std::log(ratios(prefix)[static_cast<std::size_t>(word[j] - 1)]);
    prefix.push_back(word[j]);
  }
  return acc;
}

double CascadeView::mass(const TernaryWord& word) const {
  return std::exp(log_mass(word));
}

MassCascade MassCascade::from_levels(std::vector<std::vector<double>> levels) {
  if (levels.empty() || levels[0].size() != 1) {
    throw DomainError("MassCascade: level 0 must hold exactly the root");
  }
  if (levels.size() - 1 > kMaxDepth) {
    throw DomainError("MassCascade: depth exceeds " + std::to_string(kMaxDepth));
  }
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const auto& lv = levels[j];
    if (j > 0 && lv.size() != 3 * levels[j - 1].size()) {
      throw DomainError("MassCascade: level " + std::to_string(j) +
                        " must hold 3^" + std::to_string(j) + " masses");
    }
    for (double m : lv) {
      if (!(m > 0.0) || !std::isfinite(m)) {
        throw DomainError("MassCascade: masses must be positive");
      }
    }
    if (j == 0) continue;
    const auto& up = levels[j - 1];
    for (std::size_t p = 0; p < up.size(); ++p) {
      const double s = lv[3 * p] + lv[3 * p + 1] + lv[3 * p + 2];
      if (std::abs(s - up[p]) > 1e-12) {
        throw DomainError("MassCascade: children do not sum to their parent");
      }
    }
  }
  return MassCascade(std::move(levels));
}

Split MassCascade::ratios(const TernaryWord& parent) const {
  if (parent.depth() >= depth()) {
    throw DomainError("MassCascade: no split below depth " +
                      std::to_string(depth()));
  }
  const auto r = parent.rank();
  const auto& up = levels_[parent.depth()];
  const auto& down = levels_[parent.depth() + 1];
  const double m = up[r];
  return {down[3 * r] / m, down[3 * r + 1] / m, down[3 * r + 2] / m};
}

double MassCascade::log_mass(const TernaryWord& word) const {
  if (word.depth() > depth()) {
    throw DomainError("MassCascade: word deeper than the cascade");
  }
  return std::log(levels_[word.depth()][word.rank()]);
}

MassCascade build_cascade(std::size_t k, Rng& rng) {
  if (k > MassCascade::kMaxDepth) {
    throw DomainError("build_cascade: depth " + std::to_string(k) +
                      " exceeds the memory guard of " +
                      std::to_string(MassCascade::kMaxDepth));
  }
  std::vector<std::vector<double>> levels(k + 1);
  levels[0] = {1.0};
  for (std::size_t j = 1; j <= k; ++j) {
    const auto& up = levels[j - 1];
    auto& down = levels[j];
    down.resize(3 * up.size());
    for (std::size_t p = 0; p < up.size(); ++p) {
      const Split w = sample_dirichlet_half3(rng);
      for (std::size_t a = 0; a < 3; ++a) down[3 * p + a] = up[p] * w[a];
    }
  }
  return MassCascade::from_levels(std::move(levels));
}

Split HashedCascade::ratios(const TernaryWord& parent) const {
  std::uint64_t h = derive_seed(seed_, 0x7e57ULL);
  for (auto l : parent.letters()) h = derive_seed(h, l);
  Rng rng(h);
  return sample_dirichlet_half3(rng);
}

// ---------------------------------------------------------------- traces

ZoomTrace zoom_trace(std::size_t k, Rng& rng) {
  if (k < 1) throw DomainError("zoom_trace: depth must be at least 1");
  ZoomTrace t;
  t.records.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Split w = sample_dirichlet_half3(rng);
    const int letter = static_cast<int>(size_biased_index(w, rng)) + 1;
    t.records.push_back({w, letter});
    t.path.push_back(letter);
  }
  return t;
}

std::vector<std::size_t> good_scales(const ZoomTrace& trace, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0 / 3.0)) {
    throw DomainError("good_scales: alpha must lie in (0, 1/3)");
  }
  std::vector<std::size_t> out;
  const auto& r = trace.records;
  for (std::size_t j = 1; j + 1 <= r.size(); j += 2) {
    if (j + 1 > r.size()) break;
    const auto& here = r[j - 1];
    const auto& next = r[j];
    if (here.letter != 3 || next.letter != 3) continue;
    if (std::min({next.w[0], next.w[1], next.w[2]}) >= alpha) out.push_back(j);
  }
  return out;
}

TernaryWord sample_size_biased_path(const CascadeView& c, std::size_t depth,
                                    Rng& rng) {
  if (auto md = c.max_depth(); md && depth > *md) {
    throw DomainError("sample_size_biased_path: deeper than the cascade");
  }
  TernaryWord w;
  for (std::size_t j = 0; j < depth; ++j) {
    const Split s = c.ratios(w);
    w.push_back(static_cast<int>(size_biased_index(s, rng)) + 1);
  }
  return w;
}

std::vector<std::pair<double, double>> brw_envelope(const MassCascade& c) {
  std::vector<std::pair<double, double>> out;
  out.reserve(c.depth() + 1);
  for (std::size_t j = 0; j <= c.depth(); ++j) {
    const auto lv = c.level(j);
    const auto [lo, hi] = std::minmax_element(lv.begin(), lv.end());
    out.emplace_back(std::log(*lo), std::log(*hi));
  }
  return out;
}

void write_cascade_jsonl(const MassCascade& c, std::ostream& out) {
  char buf[64];
  for (std::size_t j = 0; j <= c.depth(); ++j) {
    const auto lv = c.level(j);
    std::string word(j, '1');
    for (std::size_t r = 0; r < lv.size(); ++r) {
      std::uint64_t x = r;
      for (std::size_t p = j; p-- > 0;) {
        word[p] = static_cast<char>('1' + x % 3);
        x /= 3;
      }
      std::snprintf(buf, sizeof buf, "%.17g", lv[r]);
      out << "{\"word\":\"" << word << "\",\"mass\":" << buf << "}\n";
    }
  }
}

}  // namespace mastlab
