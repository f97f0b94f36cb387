#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "facet/errors.hpp"

namespace facet {

using SymbolId = std::uint32_t;

struct Symbol {
  std::string name;
  unsigned arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Characters allowed in symbol and nonterminal names.
inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '\'';
}

inline bool is_valid_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), is_name_char);
}

class RankedAlphabet {
 public:
  RankedAlphabet() = default;

  explicit RankedAlphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    bool has_leaf = false;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const auto& s = symbols_[i];
      if (!is_valid_name(s.name)) throw Error("invalid symbol name '" + s.name + "'");
      if (!index_.emplace(s.name, static_cast<SymbolId>(i)).second)
        throw Error("duplicate symbol '" + s.name + "'");
      has_leaf = has_leaf || s.arity == 0;
    }
    if (!has_leaf) throw Error("ranked alphabet needs a symbol of arity 0");
  }

  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](SymbolId id) const { return symbols_[id]; }
  std::span<const Symbol> symbols() const { return symbols_; }

  std::optional<SymbolId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  SymbolId id(std::string_view name) const {
    auto found = find(name);
    if (!found) throw UnknownSymbolError("unknown symbol '" + std::string(name) + "'");
    return *found;
  }

  unsigned max_arity() const {
    unsigned m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.arity);
    return m;
  }

  friend bool operator==(const RankedAlphabet& a, const RankedAlphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> index_;
};

namespace detail {

struct TermNode {
  std::string name;
  std::vector<std::shared_ptr<const TermNode>> children;
  std::size_t size = 1;
  std::size_t hash = 0;
};

struct TermKey {
  std::string_view name;
  std::vector<const TermNode*> children;
  std::size_t hash;

  friend bool operator==(const TermKey& a, const TermKey& b) {
    return a.hash == b.hash && a.name == b.name && a.children == b.children;
  }
};

struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const noexcept { return k.hash; }
};

inline std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}

// Process-wide interning table. Entries are removed when the last handle
// to a node goes away.
class TermTable {
 public:
  static TermTable& instance() {
    static TermTable* table = new TermTable();  // never destroyed: terms may outlive statics
    return *table;
  }

  std::shared_ptr<const TermNode> intern(std::string_view name,
                                         std::vector<std::shared_ptr<const TermNode>> children) {
    std::size_t h = std::hash<std::string_view>{}(name);
    std::vector<const TermNode*> raw;
    raw.reserve(children.size());
    for (const auto& c : children) {
      h = mix(h, c->hash);
      raw.push_back(c.get());
    }
    std::lock_guard lock(mutex_);
    TermKey probe{name, raw, h};
    if (auto it = table_.find(probe); it != table_.end()) {
      if (auto alive = it->second.second.lock()) return alive;
      table_.erase(it);  // dying node; its key views memory about to be freed
    }
    auto* node = new TermNode();
    node->name = std::string(name);
    node->hash = h;
    for (const auto& c : children) node->size += c->size;
    node->children = std::move(children);
    std::shared_ptr<const TermNode> handle(node, [this](const TermNode* n) { release(n); });
    TermKey key{node->name, std::move(raw), h};
    table_.emplace(std::move(key), std::make_pair(node, std::weak_ptr<const TermNode>(handle)));
    return handle;
  }

  std::size_t live() const {
    std::lock_guard lock(mutex_);
    return table_.size();
  }

 private:
  void release(const TermNode* node) {
    {
      std::lock_guard lock(mutex_);
      std::vector<const TermNode*> raw;
      for (const auto& c : node->children) raw.push_back(c.get());
      auto it = table_.find(TermKey{node->name, std::move(raw), node->hash});
      if (it != table_.end() && it->second.first == node) table_.erase(it);
    }
    delete node;  // may release children, which re-enter with the lock free
  }

  mutable std::mutex mutex_;
  std::unordered_map<TermKey, std::pair<const TermNode*, std::weak_ptr<const TermNode>>, TermKeyHash>
      table_;
};

}  // namespace detail

/// Immutable, hash-consed ranked tree. Structurally equal terms share a node,
/// so equality is pointer comparison.
class Term {
 public:
  Term() = delete;

  static Term make(const Symbol& symbol, std::vector<Term> children) {
    if (children.size() != symbol.arity)
      throw ArityError("symbol '" + symbol.name + "' has arity " + std::to_string(symbol.arity) +
                       " but got " + std::to_string(children.size()) + " children");
    return make_unchecked(symbol.name, std::move(children));
  }

  static Term leaf(const Symbol& symbol) { return make(symbol, {}); }

  static Term make(const RankedAlphabet& alphabet, std::string_view name, std::vector<Term> children) {
    return make(alphabet[alphabet.id(name)], std::move(children));
  }

  const std::string& name() const { return node_->name; }
  std::size_t arity() const { return node_->children.size(); }
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }
  Term child(std::size_t i) const { return Term(node_->children.at(i)); }

  std::vector<Term> children() const {
    std::vector<Term> out;
    out.reserve(arity());
    for (const auto& c : node_->children) out.push_back(Term(c));
    return out;
  }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& c : node_->children) d = std::max(d, Term(c).depth());
    return d + 1;
  }

  /// Stable identity for memo tables; valid while any handle is alive.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b) { return a.node_ == b.node_; }

  /// Symbol name first, then children left to right.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.name().compare(b.name()); c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    const auto& ac = a.node_->children;
    const auto& bc = b.node_->children;
    for (std::size_t i = 0; i < std::min(ac.size(), bc.size()); ++i) {
      auto c = Term(ac[i]) <=> Term(bc[i]);
      if (c != 0) return c;
    }
    return ac.size() <=> bc.size();
  }

  static std::size_t live_nodes() { return detail::TermTable::instance().live(); }

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> node) : node_(std::move(node)) {}

  static Term make_unchecked(std::string_view name, std::vector<Term> children) {
    std::vector<std::shared_ptr<const detail::TermNode>> nodes;
    nodes.reserve(children.size());
    for (auto& c : children) nodes.push_back(std::move(c.node_));
    return Term(detail::TermTable::instance().intern(name, std::move(nodes)));
  }

  std::shared_ptr<const detail::TermNode> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

/// Prefix notation, no whitespace. Leaves print without parentheses.
inline void print_term(std::string& out, const Term& t) {
  out += t.name();
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    print_term(out, t.child(i));
  }
  out += ')';
}

inline std::string to_string(const Term& t) {
  std::string out;
  print_term(out, t);
  return out;
}

namespace detail {

class TextCursor {
 public:
  explicit TextCursor(std::string_view text, std::size_t base = 0) : text_(text), base_(base) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string_view name() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }
  std::size_t offset() const { return base_ + pos_; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, offset()); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError(what, base_ + at);
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

inline Term parse_term_at(TextCursor& in, const RankedAlphabet& alphabet) {
  in.skip_space();
  std::size_t start = in.pos();
  auto name = in.name();
  auto id = alphabet.find(name);
  if (!id) in.fail_at("unknown symbol '" + std::string(name) + "'", start);
  const Symbol& sym = alphabet[*id];
  std::vector<Term> children;
  if (in.accept('(')) {
    if (!in.peek(')')) {
      do children.push_back(parse_term_at(in, alphabet));
      while (in.accept(','));
    }
    in.expect(')');
  }
  if (children.size() != sym.arity)
    in.fail_at("symbol '" + sym.name + "' expects " + std::to_string(sym.arity) + " arguments, got " +
                   std::to_string(children.size()),
               start);
  return Term::make(sym, std::move(children));
}

}  // namespace detail

/// Parses `name(child,...)`; nullary symbols may drop the parentheses.
inline Term parse_term(std::string_view text, const RankedAlphabet& alphabet) {
  detail::TextCursor in(text);
  Term t = detail::parse_term_at(in, alphabet);
  if (!in.at_end()) in.fail("trailing input");
  return t;
}

}  // namespace facet
