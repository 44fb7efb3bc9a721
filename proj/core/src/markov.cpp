// Copyright 2026 The autocompose Authors
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

#include "autocompose/markov.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>

#include <json.hpp>

#include "autocompose/corpus.hpp"
#include "autocompose/errors.hpp"

namespace autocompose {

// ---------------------------------------------------------------------------
// Distribution

Distribution::Distribution(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::erase_if(entries_, [](const Entry& e) { return !(e.probability > 0.0); });
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.symbol < b.symbol; });
}

double Distribution::probability(std::string_view symbol) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), symbol,
                             [](const Entry& e, std::string_view s) { return e.symbol < s; });
  return (it != entries_.end() && it->symbol == symbol) ? it->probability : 0.0;
}

const Distribution::Entry* Distribution::argmax() const {
  const Entry* best = nullptr;
  for (const Entry& e : entries_) {
    if (best == nullptr || e.probability > best->probability) best = &e;
  }
  return best;
}

std::vector<Distribution::Entry> Distribution::top(std::size_t n) const {
  std::vector<Entry> out(entries_);
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.symbol < b.symbol;
  };
  n = std::min(n, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), cmp);
  out.resize(n);
  return out;
}

double Distribution::total() const {
  double sum = 0.0;
  for (const Entry& e : entries_) sum += e.probability;
  return sum;
}

// ---------------------------------------------------------------------------
// SymbolKind

std::string_view to_string(SymbolKind kind) {
  return kind == SymbolKind::word ? "word" : "char";
}

SymbolKind symbol_kind_from_string(std::string_view s) {
  if (s == "word") return SymbolKind::word;
  if (s == "char") return SymbolKind::character;
  throw InvalidParameter("unknown symbol_kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// MarkovModel

MarkovModel::MarkovModel(int order, SymbolKind kind) : order_(order), kind_(kind) {
  if (order < 1) throw InvalidParameter("markov order must be >= 1, got " + std::to_string(order));
}

MarkovModel MarkovModel::train(std::span<const std::vector<std::string>> sequences, int order,
                               SymbolKind kind) {
  MarkovModel model(order, kind);
  for (const auto& seq : sequences) model.add_sequence(seq);
  return model;
}

SymbolId MarkovModel::intern(const std::string& symbol) {
  auto [it, inserted] = symbol_index_.try_emplace(symbol, static_cast<SymbolId>(symbols_.size()));
  if (inserted) symbols_.push_back(symbol);
  return it->second;
}

std::string MarkovModel::pack(std::span<const SymbolId> ids) {
  std::string key(ids.size() * sizeof(SymbolId), '\0');
  std::memcpy(key.data(), ids.data(), key.size());
  return key;
}

void MarkovModel::add_sequence(std::span<const std::string> sequence) {
  if (sequence.empty()) return;
  const bool padded = kind_ == SymbolKind::word && sequence.front() == corpus::kStartToken;
  const std::size_t pad = padded ? static_cast<std::size_t>(order_ - 1) : 0;

  std::vector<SymbolId> ids;
  ids.reserve(sequence.size() + pad);
  if (padded) ids.assign(pad, intern(sequence.front()));
  for (const std::string& s : sequence) ids.push_back(intern(s));

  const auto k = static_cast<std::size_t>(order_);
  for (std::size_t i = pad + 1; i < ids.size(); ++i) {
    const SymbolId target = ids[i];
    for (std::size_t len = 1; len <= std::min(k, i); ++len) {
      ContextEntry& entry = contexts_[pack(std::span(ids).subspan(i - len, len))];
      ++entry.count;
      auto it = std::lower_bound(entry.next.begin(), entry.next.end(), target,
                                 [](const Transition& t, SymbolId id) { return t.symbol < id; });
      if (it != entry.next.end() && it->symbol == target) {
        ++it->count;
      } else {
        entry.next.insert(it, Transition{target, 1});
      }
    }
    ++token_count_;
  }
}

std::vector<std::string> MarkovModel::padded_context(std::span<const std::string> context) const {
  const auto k = static_cast<std::size_t>(order_);
  if (context.size() >= k) return {context.end() - static_cast<std::ptrdiff_t>(k), context.end()};
  if (kind_ != SymbolKind::word) return {};
  if (!context.empty() && context.front() != corpus::kStartToken) return {};
  std::vector<std::string> out(k - context.size(), std::string(corpus::kStartToken));
  out.insert(out.end(), context.begin(), context.end());
  return out;
}

Distribution MarkovModel::next_distribution(std::span<const std::string> context) const {
  std::vector<std::string> ctx = padded_context(context);
  if (ctx.empty()) return {};
  return distribution_for(ctx);
}

Distribution MarkovModel::distribution_for(std::span<const std::string> context) const {
  if (context.empty() || context.size() > static_cast<std::size_t>(order_)) return {};
  std::vector<SymbolId> ids;
  ids.reserve(context.size());
  for (const std::string& s : context) {
    auto id = symbol_id(s);
    if (!id) return {};
    ids.push_back(*id);
  }
  const ContextEntry* entry = find(ids);
  if (entry == nullptr) return {};

  std::vector<Distribution::Entry> entries;
  entries.reserve(entry->next.size());
  const auto total = static_cast<double>(entry->count);
  for (const Transition& t : entry->next) {
    entries.push_back({symbols_[t.symbol], static_cast<double>(t.count) / total});
  }
  return Distribution(std::move(entries));
}

std::optional<SymbolId> MarkovModel::symbol_id(std::string_view symbol) const {
  auto it = symbol_index_.find(std::string(symbol));
  if (it == symbol_index_.end()) return std::nullopt;
  return it->second;
}

const ContextEntry* MarkovModel::find(std::span<const SymbolId> context) const {
  auto it = contexts_.find(pack(context));
  return it == contexts_.end() ? nullptr : &it->second;
}

std::uint64_t MarkovModel::count(std::span<const std::string> context) const {
  std::vector<SymbolId> ids;
  for (const std::string& s : context) {
    auto id = symbol_id(s);
    if (!id) return 0;
    ids.push_back(*id);
  }
  const ContextEntry* entry = find(ids);
  return entry ? entry->count : 0;
}

std::uint64_t MarkovModel::count(std::span<const std::string> context, std::string_view next) const {
  std::vector<SymbolId> ids;
  for (const std::string& s : context) {
    auto id = symbol_id(s);
    if (!id) return 0;
    ids.push_back(*id);
  }
  auto next_id = symbol_id(next);
  const ContextEntry* entry = find(ids);
  if (entry == nullptr || !next_id) return 0;
  for (const Transition& t : entry->next) {
    if (t.symbol == *next_id) return t.count;
  }
  return 0;
}

std::vector<ContextRecord> MarkovModel::records() const {
  std::vector<ContextRecord> out;
  out.reserve(contexts_.size());
  for (const auto& [key, entry] : contexts_) {
    ContextRecord rec;
    const std::size_t n = key.size() / sizeof(SymbolId);
    rec.context.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      SymbolId id;
      std::memcpy(&id, key.data() + i * sizeof(SymbolId), sizeof id);
      rec.context.push_back(symbols_[id]);
    }
    rec.count = entry.count;
    rec.next.reserve(entry.next.size());
    for (const Transition& t : entry.next) rec.next.emplace_back(symbols_[t.symbol], t.count);
    std::sort(rec.next.begin(), rec.next.end());
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(),
            [](const ContextRecord& a, const ContextRecord& b) { return a.context < b.context; });
  return out;
}

MarkovModel MarkovModel::from_records(int order, SymbolKind kind,
                                      std::span<const ContextRecord> records) {
  MarkovModel model(order, kind);
  for (const ContextRecord& rec : records) {
    if (rec.context.empty() || rec.context.size() > static_cast<std::size_t>(order)) {
      throw IntegrityError("context length outside 1..k");
    }
    if (rec.next.empty()) throw IntegrityError("context without transitions");
    std::vector<SymbolId> ids;
    for (const std::string& s : rec.context) ids.push_back(model.intern(s));
    auto [it, inserted] = model.contexts_.try_emplace(pack(ids));
    if (!inserted) throw IntegrityError("duplicate context");
    ContextEntry& entry = it->second;
    std::uint64_t sum = 0;
    for (const auto& [symbol, count] : rec.next) {
      if (count == 0) throw IntegrityError("zero transition count");
      entry.next.push_back({model.intern(symbol), count});
      sum += count;
    }
    if (sum != rec.count) throw IntegrityError("context count differs from transition total");
    std::sort(entry.next.begin(), entry.next.end(),
              [](const Transition& a, const Transition& b) { return a.symbol < b.symbol; });
    for (std::size_t i = 1; i < entry.next.size(); ++i) {
      if (entry.next[i].symbol == entry.next[i - 1].symbol) {
        throw IntegrityError("duplicate transition symbol");
      }
    }
    entry.count = sum;
    if (rec.context.size() == 1) model.token_count_ += sum;
  }
  return model;
}

bool MarkovModel::consistent() const {
  for (const auto& [key, entry] : contexts_) {
    std::uint64_t sum = 0;
    for (const Transition& t : entry.next) {
      if (t.count == 0) return false;
      sum += t.count;
    }
    if (sum != entry.count || entry.count == 0) return false;
  }
  return true;
}

bool MarkovModel::operator==(const MarkovModel& other) const {
  return order_ == other.order_ && kind_ == other.kind_ &&
         contexts_.size() == other.contexts_.size() && records() == other.records();
}

MarkovModel update(const MarkovModel& model, std::span<const std::string> sequence) {
  MarkovModel out = model;
  out.add_sequence(sequence);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize(const MarkovModel& model) {
  std::ostringstream out;
  out << "{\"contexts\":[";
  bool first = true;
  for (const ContextRecord& rec : model.records()) {
    nlohmann::json next = nlohmann::json::object();
    for (const auto& [symbol, count] : rec.next) next[symbol] = count;
    nlohmann::json j = {{"count", rec.count}, {"ctx", rec.context}, {"next", std::move(next)}};
    out << (first ? "\n" : ",\n") << j.dump();
    first = false;
  }
  if (!first) out << "\n";
  out << "],\"k\":" << model.order() << ",\"symbol_kind\":\"" << to_string(model.kind())
      << "\"}\n";
  return out.str();
}

MarkovModel deserialize(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw IntegrityError("model file must hold a JSON object");
    const int k = j.at("k").get<int>();
    if (k < 1) throw IntegrityError("model order must be >= 1");
    SymbolKind kind;
    try {
      kind = symbol_kind_from_string(j.at("symbol_kind").get<std::string>());
    } catch (const InvalidParameter& e) {
      throw IntegrityError(e.what());
    }
    std::vector<ContextRecord> records;
    for (const auto& c : j.at("contexts")) {
      ContextRecord rec;
      rec.context = c.at("ctx").get<std::vector<std::string>>();
      if (!c.at("count").is_number_unsigned()) throw IntegrityError("context count must be unsigned");
      rec.count = c.at("count").get<std::uint64_t>();
      for (const auto& [symbol, count] : c.at("next").items()) {
        if (!count.is_number_unsigned()) throw IntegrityError("transition count must be unsigned");
        rec.next.emplace_back(symbol, count.get<std::uint64_t>());
      }
      records.push_back(std::move(rec));
    }
    return MarkovModel::from_records(k, kind, records);
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace autocompose
