#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace syncomp {

// Thrown when a value does not fit the sort an operation expects.
struct SortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Status : std::uint8_t { ok, fail };

enum class SortKind : std::uint8_t {
  unit,
  boolean,
  natural,
  status,
  message,
  id_list,
  tuple,
  optional,
};

/// Structural sort descriptor for wire and state values. Tuples nest;
/// optional(T) means "a T or the distinguished nomsg".
class Sort {
 public:
  Sort() : kind_(SortKind::unit) {}

  static Sort unit() { return Sort(SortKind::unit); }
  static Sort boolean() { return Sort(SortKind::boolean); }
  static Sort natural() { return Sort(SortKind::natural); }
  static Sort status() { return Sort(SortKind::status); }
  static Sort message() { return Sort(SortKind::message); }
  static Sort id_list() { return Sort(SortKind::id_list); }
  static Sort tuple(std::vector<Sort> elems);
  static Sort optional(Sort inner);

  SortKind kind() const { return kind_; }
  std::span<const Sort> elems() const;
  const Sort& inner() const;
  std::size_t arity() const { return elems().size(); }

  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Sort& a, const Sort& b);
  friend bool operator!=(const Sort& a, const Sort& b) { return !(a == b); }

 private:
  explicit Sort(SortKind k) : kind_(k) {}

  SortKind kind_;
  std::shared_ptr<const std::vector<Sort>> sub_;  // tuple elems / optional inner
};

/// True when an input port of sort `dst` may be fed from an output of sort
/// `src`: equal sorts, or an optional accepting its inner sort, recursively
/// through tuples.
bool sort_accepts(const Sort& dst, const Sort& src);

enum class ValueKind : std::uint8_t {
  star,
  boolean,
  natural,
  status,
  message,
  nomsg,
  id_list,
  tuple,
};

/// Hello-message payload: sender id plus grid coordinates.
struct MsgData {
  std::uint32_t id = 1;  // >= 1
  std::uint64_t x = 0;
  std::uint64_t y = 0;

  friend bool operator==(const MsgData&, const MsgData&) = default;
};

/// Universal tagged datum carried on wires and held in machine states.
/// Values are immutable; copies share payloads, so they are cheap to pass
/// around and safe to use across threads.
class Value {
 public:
  Value() : repr_(StarTag{}) {}

  static Value star() { return Value(); }
  static Value boolean(bool b);
  static Value nat(std::uint64_t n);
  static Value status(Status s);
  static Value ok() { return status(Status::ok); }
  static Value fail() { return status(Status::fail); }
  static Value msg(std::uint32_t id, std::uint64_t x, std::uint64_t y);
  static Value nomsg();
  static Value id_list(std::vector<std::uint32_t> ids);
  static Value tuple(std::vector<Value> elems);

  ValueKind kind() const;

  bool as_bool() const;
  std::uint64_t as_nat() const;
  Status as_status() const;
  const MsgData& as_msg() const;
  std::span<const std::uint32_t> ids() const;
  std::span<const Value> elems() const;
  std::size_t arity() const { return elems().size(); }

  /// The unique structural sort of this value.
  Sort sort_of() const;

  /// Whether this value inhabits `s`, treating optional(T) as accepting
  /// either nomsg or a T.
  bool conforms(const Sort& s) const;

  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

 private:
  struct StarTag {};
  struct NoMsgTag {};
  using IdsPtr = std::shared_ptr<const std::vector<std::uint32_t>>;
  using TuplePtr = std::shared_ptr<const std::vector<Value>>;
  using Repr = std::variant<StarTag, bool, std::uint64_t, Status, MsgData,
                            NoMsgTag, IdsPtr, TuplePtr>;

  explicit Value(Repr r) : repr_(std::move(r)) {}

  Repr repr_;
};

/// k-th component of a tuple value, 1-indexed.
/// Throws std::out_of_range when k exceeds the arity.
Value project(const Value& v, std::size_t k);

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::ostream& operator<<(std::ostream& os, const Value& v);
std::ostream& operator<<(std::ostream& os, const Sort& s);

}  // namespace syncomp
