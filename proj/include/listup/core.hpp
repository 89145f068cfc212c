#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace listup {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AbsentItem : Error { using Error::Error; };
struct InvalidPosition : Error { using Error::Error; };
struct UniverseMismatch : Error { using Error::Error; };
struct InvalidSequence : Error { using Error::Error; };
struct StateSpaceExceeded : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ---------------------------------------------------------------------------
// Items
// ---------------------------------------------------------------------------

using ItemId = std::int32_t;
inline constexpr ItemId kNoItem = -1;

/// Bijection between item ids (0, 1, ...) and display labels.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<std::string> labels) {
    for (auto& l : labels) intern(l);
  }

  /// Universe of `n` items labelled a, b, c, ... (x26, x27, ... past z).
  static Universe letters(std::size_t n) {
    Universe u;
    for (std::size_t i = 0; i < n; ++i) u.intern(default_label(i));
    return u;
  }

  /// Universe of `n` items labelled x0, x1, ...
  static Universe indexed(std::size_t n, std::string_view prefix = "x") {
    Universe u;
    for (std::size_t i = 0; i < n; ++i) u.intern(std::string(prefix) + std::to_string(i));
    return u;
  }

  static std::string default_label(std::size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "x" + std::to_string(i);
  }

  ItemId intern(const std::string& label) {
    if (auto it = ids_.find(label); it != ids_.end()) return it->second;
    auto id = static_cast<ItemId>(labels_.size());
    labels_.push_back(label);
    ids_.emplace(label, id);
    return id;
  }

  ItemId id(const std::string& label) const {
    auto it = ids_.find(label);
    if (it == ids_.end()) throw AbsentItem("unknown item label '" + label + "'");
    return it->second;
  }

  bool contains(const std::string& label) const { return ids_.count(label) != 0; }

  const std::string& label(ItemId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= labels_.size())
      throw AbsentItem("unknown item id " + std::to_string(id));
    return labels_[static_cast<std::size_t>(id)];
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const Universe& o) const { return labels_ == o.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, ItemId> ids_;
};

// ---------------------------------------------------------------------------
// Cost model
// ---------------------------------------------------------------------------

enum class CostModel { Partial, Full };

inline std::string to_string(CostModel m) { return m == CostModel::Partial ? "partial" : "full"; }

inline CostModel parse_cost_model(std::string_view s) {
  if (s == "partial") return CostModel::Partial;
  if (s == "full") return CostModel::Full;
  throw Error("unknown cost model '" + std::string(s) + "'");
}

/// Cost of touching the item at 1-based `position`.
inline std::int64_t position_cost(std::size_t position, CostModel model) {
  return model == CostModel::Partial ? static_cast<std::int64_t>(position) - 1
                                     : static_cast<std::int64_t>(position);
}

// ---------------------------------------------------------------------------
// ListState
// ---------------------------------------------------------------------------

/// A list of distinct items. Positions are 1-based at the interface.
class ListState {
 public:
  ListState() = default;
  explicit ListState(std::vector<ItemId> order) : order_(std::move(order)) {
    std::vector<ItemId> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidSequence("list contains a duplicate item");
    for (ItemId x : order_)
      if (x < 0) throw InvalidSequence("negative item id in list");
  }

  static ListState identity(std::size_t n) {
    std::vector<ItemId> v(n);
    std::iota(v.begin(), v.end(), 0);
    return ListState(std::move(v));
  }

  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  const std::vector<ItemId>& order() const { return order_; }

  /// Item at 1-based position.
  ItemId at(std::size_t position) const {
    if (position < 1 || position > order_.size())
      throw InvalidPosition("position " + std::to_string(position) + " outside 1.." +
                            std::to_string(order_.size()));
    return order_[position - 1];
  }

  ItemId front() const { return at(1); }

  bool contains(ItemId x) const { return std::find(order_.begin(), order_.end(), x) != order_.end(); }

  /// 1-based position of `x`.
  std::size_t position(ItemId x) const {
    auto it = std::find(order_.begin(), order_.end(), x);
    if (it == order_.end()) throw AbsentItem("item " + std::to_string(x) + " not in list");
    return static_cast<std::size_t>(it - order_.begin()) + 1;
  }

  /// True iff `a` precedes `b` (strictly).
  bool precedes(ItemId a, ItemId b) const { return position(a) < position(b); }

  /// Moves `x` to `target` (1-based); returns the number of adjacent swaps.
  std::size_t move_to(ItemId x, std::size_t target) {
    if (target < 1 || target > order_.size())
      throw InvalidPosition("target position " + std::to_string(target) + " outside 1.." +
                            std::to_string(order_.size()));
    std::size_t from = position(x);
    auto first = order_.begin();
    if (target < from)
      std::rotate(first + static_cast<std::ptrdiff_t>(target - 1), first + static_cast<std::ptrdiff_t>(from - 1),
                  first + static_cast<std::ptrdiff_t>(from));
    else if (target > from)
      std::rotate(first + static_cast<std::ptrdiff_t>(from - 1), first + static_cast<std::ptrdiff_t>(from),
                  first + static_cast<std::ptrdiff_t>(target));
    return from > target ? from - target : target - from;
  }

  void push_back(ItemId x) {
    if (contains(x)) throw InvalidSequence("item " + std::to_string(x) + " already present");
    order_.push_back(x);
  }

  void erase(ItemId x) { order_.erase(order_.begin() + static_cast<std::ptrdiff_t>(position(x) - 1)); }

  bool operator==(const ListState& o) const { return order_ == o.order_; }
  bool operator!=(const ListState& o) const { return !(*this == o); }

 private:
  std::vector<ItemId> order_;
};

inline std::int64_t access_cost(const ListState& list, ItemId item, CostModel model) {
  return position_cost(list.position(item), model);
}

/// Returns the list with `item` moved to `target_position` and the swap count.
inline std::pair<ListState, std::size_t> move_item(ListState list, ItemId item, std::size_t target_position) {
  std::size_t swaps = list.move_to(item, target_position);
  return {std::move(list), swaps};
}

/// Kendall-tau distance: the number of item pairs ordered differently.
inline std::size_t swap_distance(const ListState& p, const ListState& q) {
  if (p.size() != q.size()) throw UniverseMismatch("lists have different lengths");
  std::unordered_map<ItemId, std::size_t> rank;
  for (std::size_t i = 0; i < q.size(); ++i) rank.emplace(q.order()[i], i);
  std::vector<std::size_t> seq;
  seq.reserve(p.size());
  for (ItemId x : p.order()) {
    auto it = rank.find(x);
    if (it == rank.end()) throw UniverseMismatch("lists hold different item sets");
    seq.push_back(it->second);
  }
  // merge-sort inversion count
  std::vector<std::size_t> buf(seq.size());
  std::size_t inversions = 0;
  for (std::size_t width = 1; width < seq.size(); width *= 2) {
    for (std::size_t lo = 0; lo < seq.size(); lo += 2 * width) {
      std::size_t mid = std::min(lo + width, seq.size()), hi = std::min(lo + 2 * width, seq.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (seq[j] < seq[i]) {
          inversions += mid - i;
          buf[k++] = seq[j++];
        } else {
          buf[k++] = seq[i++];
        }
      }
      while (i < mid) buf[k++] = seq[i++];
      while (j < hi) buf[k++] = seq[j++];
    }
    seq.swap(buf);
  }
  return inversions;
}

// ---------------------------------------------------------------------------
// Events and sequences
// ---------------------------------------------------------------------------

enum class EventKind { Access, Insert, Delete };

struct Event {
  EventKind kind = EventKind::Access;
  ItemId item = kNoItem;

  static Event access(ItemId x) { return {EventKind::Access, x}; }
  static Event insert(ItemId x) { return {EventKind::Insert, x}; }
  static Event remove(ItemId x) { return {EventKind::Delete, x}; }

  bool operator==(const Event& o) const { return kind == o.kind && item == o.item; }
};

struct RequestSequence {
  Universe universe;
  ListState initial;
  std::vector<Event> events;

  bool access_only() const {
    return std::all_of(events.begin(), events.end(), [](const Event& e) { return e.kind == EventKind::Access; });
  }

  /// Replays the events and throws InvalidSequence on the first violation.
  void validate() const {
    std::vector<char> present(universe.size(), 0), deleted(universe.size(), 0);
    for (ItemId x : initial.order()) {
      if (static_cast<std::size_t>(x) >= universe.size()) throw InvalidSequence("initial item outside universe");
      present[static_cast<std::size_t>(x)] = 1;
    }
    std::size_t live = initial.size();
    for (std::size_t t = 0; t < events.size(); ++t) {
      const Event& e = events[t];
      auto where = " at event " + std::to_string(t + 1);
      if (e.item < 0 || static_cast<std::size_t>(e.item) >= universe.size())
        throw InvalidSequence("item outside universe" + where);
      auto i = static_cast<std::size_t>(e.item);
      switch (e.kind) {
        case EventKind::Access:
          if (!present[i]) throw InvalidSequence("access to absent item '" + universe.label(e.item) + "'" + where);
          break;
        case EventKind::Insert:
          if (present[i]) throw InvalidSequence("insert of present item '" + universe.label(e.item) + "'" + where);
          if (deleted[i]) throw InvalidSequence("re-insert of deleted item '" + universe.label(e.item) + "'" + where);
          present[i] = 1;
          ++live;
          break;
        case EventKind::Delete:
          if (!present[i]) throw InvalidSequence("delete of absent item '" + universe.label(e.item) + "'" + where);
          if (live == 1) throw InvalidSequence("delete would empty the list" + where);
          present[i] = 0;
          deleted[i] = 1;
          --live;
          break;
      }
    }
  }
};

/// Builds an access-only sequence over the letters universe from a string like "cab".
inline RequestSequence letters_sequence(std::size_t n, std::string_view requests) {
  RequestSequence seq{Universe::letters(n), ListState::identity(n), {}};
  for (char ch : requests) seq.events.push_back(Event::access(static_cast<ItemId>(ch - 'a')));
  return seq;
}

// ---------------------------------------------------------------------------
// Step reports
// ---------------------------------------------------------------------------

struct StepReport {
  Event event;
  std::int64_t access_cost = 0;
  std::int64_t swap_count = 0;
  std::int64_t total_cost = 0;
  ListState list_after;
};

}  // namespace listup
