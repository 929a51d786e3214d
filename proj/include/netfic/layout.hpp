#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "netfic/error.hpp"
#include "netfic/field.hpp"

namespace netfic {

// Fixed-length vector of field symbols. Immutable by convention once built.
class SymbolVec {
 public:
  SymbolVec(FieldSpec field, std::vector<std::uint8_t> symbols)
      : field_(field), symbols_(std::move(symbols)) {
    for (std::uint8_t s : symbols_)
      if (s >= field_.q())
        throw Error(Errc::DomainViolation,
                    "symbol " + std::to_string(s) + " >= q = " + std::to_string(field_.q()));
  }

  static SymbolVec zeros(FieldSpec field, std::size_t width) {
    return SymbolVec(field, std::vector<std::uint8_t>(width, 0));
  }
  static SymbolVec filled(FieldSpec field, std::size_t width, std::uint8_t s) {
    return SymbolVec(field, std::vector<std::uint8_t>(width, s));
  }

  const FieldSpec& field() const { return field_; }
  std::size_t width() const { return symbols_.size(); }
  std::uint8_t operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<std::uint8_t>& symbols() const { return symbols_; }
  std::span<const std::uint8_t> span() const { return symbols_; }

  bool operator==(const SymbolVec& o) const {
    return field_ == o.field_ && symbols_ == o.symbols_;
  }
  bool operator!=(const SymbolVec& o) const { return !(*this == o); }

  // Lexicographic order; doubles as base-q integer order for equal widths
  // (most significant symbol first).
  bool operator<(const SymbolVec& o) const {
    return std::lexicographical_compare(symbols_.begin(), symbols_.end(),
                                        o.symbols_.begin(), o.symbols_.end());
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(symbols_[i]);
    }
    return s + ")";
  }

 private:
  FieldSpec field_;
  std::vector<std::uint8_t> symbols_;
};

// Ordered list of named blocks partitioning a symbol vector.
class BlockLayout {
 public:
  struct Block {
    std::string name;
    std::size_t width;
    std::size_t offset;  // start position within the flattened vector
  };

  BlockLayout() = default;

  explicit BlockLayout(const std::vector<std::pair<std::string, std::size_t>>& blocks) {
    for (const auto& [name, width] : blocks) append(name, width);
  }

  void append(const std::string& name, std::size_t width) {
    if (name.empty()) throw Error(Errc::Semantic, "empty block name");
    if (width == 0) throw Error(Errc::WidthMismatch, "block '" + name + "' has width 0");
    if (index_.count(name))
      throw Error(Errc::Semantic, "duplicate block name '" + name + "'");
    index_[name] = blocks_.size();
    blocks_.push_back({name, width, total_});
    total_ += width;
  }

  std::size_t total_width() const { return total_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(std::size_t i) const { return blocks_[i]; }

  bool has(const std::string& name) const { return index_.count(name) != 0; }

  const Block& find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(Errc::UnknownBlock, "no block named '" + name + "'");
    return blocks_[it->second];
  }

 private:
  std::vector<Block> blocks_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t total_ = 0;
};

}  // namespace netfic
