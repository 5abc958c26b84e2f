#include "mastlab/newick.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "mastlab/error.hpp"

namespace mastlab {

std::string to_newick(const Cladogram& t) { return canonical_form(t); }

namespace {

// Plain graph built while reading; converted to a Cladogram once degree-2
// vertices are contracted.
struct RawTree {
  std::vector<std::vector<int>> adj;
  std::vector<Label> labels;

  int add(Label l) {
    adj.emplace_back();
    labels.push_back(l);
    return static_cast<int>(labels.size() - 1);
  }
  void link(int a, int b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RawTree run() {
    skip_ws();
    if (peek() == ';') {
      ++pos_;
      finish();
      return raw_;
    }
    subtree();
    skip_ws();
    expect(';');
    finish();
    return raw_;
  }

 private:
  int subtree() {
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      const int node = raw_.add(kNoLabel);
      for (;;) {
        const int child = subtree();
        raw_.link(node, child);
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
      const Label l = name();
      if (l != kNoLabel) fail("internal nodes cannot carry labels");
      branch_length();
      return node;
    }
    const int leaf = raw_.add(name());
    branch_length();
    return leaf;
  }

  Label name() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) return kNoLabel;
    Label value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc()) fail("label out of range");
    return value;
  }

  void branch_length() {
    skip_ws();
    if (peek() != ':') return;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E' ||
            s_[pos_] == '-' || s_[pos_] == '+')) {
      ++pos_;
    }
    if (start == pos_) fail("empty branch length");
  }

  void finish() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("parse_newick: " + why + " at offset " +
                      std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  RawTree raw_;
};

}  // namespace

Cladogram parse_newick(std::string_view text) {
  RawTree raw = Parser(text).run();
  const std::size_t n = raw.labels.size();
  // Contract degree-2 vertices (a rooted binary root, or "((1,2))" style
  // unary wrappers) by splicing their two neighbours together.
  std::vector<std::uint8_t> gone(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto& adj = raw.adj[v];
    if (adj.size() != 2 || raw.labels[v] != kNoLabel) continue;
    const int a = adj[0];
    const int b = adj[1];
    for (int& x : raw.adj[static_cast<std::size_t>(a)]) {
      if (x == static_cast<int>(v)) x = b;
    }
    for (int& x : raw.adj[static_cast<std::size_t>(b)]) {
      if (x == static_cast<int>(v)) x = a;
    }
    adj.clear();
    gone[v] = 1;
  }
  Cladogram::Builder builder;
  std::vector<NodeId> id(n, kNoNode);
  for (std::size_t v = 0; v < n; ++v) {
    if (!gone[v]) id[v] = builder.add_node(raw.labels[v]);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (gone[v]) continue;
    if (raw.adj[v].size() > 3) {
      throw DomainError("parse_newick: tree is not binary");
    }
    for (int w : raw.adj[v]) {
      if (static_cast<std::size_t>(w) > v) {
        builder.add_edge(id[v], id[static_cast<std::size_t>(w)]);
      }
    }
  }
  return builder.build();
}

}  // namespace mastlab
