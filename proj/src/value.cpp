#include "syncomp/value.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace syncomp {

Sort Sort::tuple(std::vector<Sort> elems) {
  if (elems.empty()) {
    throw SortError("tuple sorts must have arity >= 1");
  }
  Sort s(SortKind::tuple);
  s.sub_ = std::make_shared<const std::vector<Sort>>(std::move(elems));
  return s;
}

Sort Sort::optional(Sort inner) {
  Sort s(SortKind::optional);
  s.sub_ = std::make_shared<const std::vector<Sort>>(
      std::vector<Sort>{std::move(inner)});
  return s;
}

std::span<const Sort> Sort::elems() const {
  if (kind_ != SortKind::tuple) {
    return {};
  }
  return {sub_->data(), sub_->size()};
}

const Sort& Sort::inner() const {
  if (kind_ != SortKind::optional) {
    throw SortError("inner() on non-optional sort " + str());
  }
  return (*sub_)[0];
}

std::size_t Sort::hash() const {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL + 1;
  if (sub_) {
    for (const Sort& s : *sub_) {
      h = hash_combine(h, s.hash());
    }
  }
  return h;
}

std::string Sort::str() const {
  switch (kind_) {
    case SortKind::unit:
      return "unit";
    case SortKind::boolean:
      return "boolean";
    case SortKind::natural:
      return "natural";
    case SortKind::status:
      return "status";
    case SortKind::message:
      return "message";
    case SortKind::id_list:
      return "idList";
    case SortKind::optional:
      return "optional(" + inner().str() + ")";
    case SortKind::tuple: {
      std::string out = "tuple(";
      bool first = true;
      for (const Sort& s : elems()) {
        if (!first) out += ",";
        out += s.str();
        first = false;
      }
      return out + ")";
    }
  }
  return "?";
}

bool operator==(const Sort& a, const Sort& b) {
  if (a.kind_ != b.kind_) return false;
  if (!a.sub_ && !b.sub_) return true;
  if (!a.sub_ || !b.sub_) return false;
  return *a.sub_ == *b.sub_;
}

bool sort_accepts(const Sort& dst, const Sort& src) {
  if (dst == src) return true;
  if (dst.kind() == SortKind::optional) {
    return sort_accepts(dst.inner(), src);
  }
  if (dst.kind() == SortKind::tuple && src.kind() == SortKind::tuple &&
      dst.arity() == src.arity()) {
    for (std::size_t i = 0; i < dst.arity(); ++i) {
      if (!sort_accepts(dst.elems()[i], src.elems()[i])) return false;
    }
    return true;
  }
  return false;
}

Value Value::boolean(bool b) { return Value(Repr(b)); }

Value Value::nat(std::uint64_t n) { return Value(Repr(n)); }

Value Value::status(Status s) { return Value(Repr(s)); }

Value Value::msg(std::uint32_t id, std::uint64_t x, std::uint64_t y) {
  if (id == 0) {
    throw SortError("message ids must be >= 1");
  }
  return Value(Repr(MsgData{id, x, y}));
}

Value Value::nomsg() { return Value(Repr(NoMsgTag{})); }

Value Value::id_list(std::vector<std::uint32_t> ids) {
  for (std::uint32_t id : ids) {
    if (id == 0) {
      throw SortError("idList entries must be >= 1");
    }
  }
  return Value(
      Repr(std::make_shared<const std::vector<std::uint32_t>>(std::move(ids))));
}

Value Value::tuple(std::vector<Value> elems) {
  if (elems.empty()) {
    throw SortError("tuple values must have arity >= 1");
  }
  return Value(Repr(std::make_shared<const std::vector<Value>>(std::move(elems))));
}

ValueKind Value::kind() const {
  return static_cast<ValueKind>(repr_.index());
}

bool Value::as_bool() const {
  if (const bool* b = std::get_if<bool>(&repr_)) return *b;
  throw SortError("expected boolean, got " + str());
}

std::uint64_t Value::as_nat() const {
  if (const std::uint64_t* n = std::get_if<std::uint64_t>(&repr_)) return *n;
  throw SortError("expected natural, got " + str());
}

Status Value::as_status() const {
  if (const Status* s = std::get_if<Status>(&repr_)) return *s;
  throw SortError("expected status, got " + str());
}

const MsgData& Value::as_msg() const {
  if (const MsgData* m = std::get_if<MsgData>(&repr_)) return *m;
  throw SortError("expected message, got " + str());
}

std::span<const std::uint32_t> Value::ids() const {
  if (const IdsPtr* p = std::get_if<IdsPtr>(&repr_)) {
    return {(*p)->data(), (*p)->size()};
  }
  throw SortError("expected idList, got " + str());
}

std::span<const Value> Value::elems() const {
  if (const TuplePtr* p = std::get_if<TuplePtr>(&repr_)) {
    return {(*p)->data(), (*p)->size()};
  }
  return {};
}

Sort Value::sort_of() const {
  switch (kind()) {
    case ValueKind::star:
      return Sort::unit();
    case ValueKind::boolean:
      return Sort::boolean();
    case ValueKind::natural:
      return Sort::natural();
    case ValueKind::status:
      return Sort::status();
    case ValueKind::message:
      return Sort::message();
    case ValueKind::nomsg:
      return Sort::optional(Sort::message());
    case ValueKind::id_list:
      return Sort::id_list();
    case ValueKind::tuple: {
      std::vector<Sort> sorts;
      sorts.reserve(arity());
      for (const Value& v : elems()) {
        sorts.push_back(v.sort_of());
      }
      return Sort::tuple(std::move(sorts));
    }
  }
  return Sort::unit();
}

bool Value::conforms(const Sort& s) const {
  switch (s.kind()) {
    case SortKind::optional:
      return kind() == ValueKind::nomsg || conforms(s.inner()) ||
             sort_of() == s;
    case SortKind::tuple: {
      if (kind() != ValueKind::tuple || arity() != s.arity()) return false;
      for (std::size_t i = 0; i < arity(); ++i) {
        if (!elems()[i].conforms(s.elems()[i])) return false;
      }
      return true;
    }
    default:
      return sort_of() == s;
  }
}

std::size_t Value::hash() const {
  std::size_t h = static_cast<std::size_t>(kind()) * 0xff51afd7ed558ccdULL + 3;
  switch (kind()) {
    case ValueKind::star:
    case ValueKind::nomsg:
      return h;
    case ValueKind::boolean:
      return hash_combine(h, as_bool() ? 2 : 1);
    case ValueKind::natural:
      return hash_combine(h, as_nat());
    case ValueKind::status:
      return hash_combine(h, as_status() == Status::fail ? 2 : 1);
    case ValueKind::message: {
      const MsgData& m = as_msg();
      h = hash_combine(h, m.id);
      h = hash_combine(h, m.x);
      return hash_combine(h, m.y);
    }
    case ValueKind::id_list: {
      for (std::uint32_t id : ids()) h = hash_combine(h, id);
      return hash_combine(h, ids().size());
    }
    case ValueKind::tuple: {
      for (const Value& v : elems()) h = hash_combine(h, v.hash());
      return hash_combine(h, arity());
    }
  }
  return h;
}

std::string Value::str() const {
  switch (kind()) {
    case ValueKind::star:
      return "*";
    case ValueKind::boolean:
      return as_bool() ? "true" : "false";
    case ValueKind::natural:
      return std::to_string(as_nat());
    case ValueKind::status:
      return as_status() == Status::ok ? "ok" : "fail";
    case ValueKind::message: {
      const MsgData& m = as_msg();
      std::ostringstream os;
      os << "msg(" << m.id << "," << m.x << "," << m.y << ")";
      return os.str();
    }
    case ValueKind::nomsg:
      return "nomsg";
    case ValueKind::id_list: {
      std::string out = "[";
      bool first = true;
      for (std::uint32_t id : ids()) {
        if (!first) out += " ";
        out += std::to_string(id);
        first = false;
      }
      return out + "]";
    }
    case ValueKind::tuple: {
      std::string out = "(";
      bool first = true;
      for (const Value& v : elems()) {
        if (!first) out += ", ";
        out += v.str();
        first = false;
      }
      return out + ")";
    }
  }
  return "?";
}

bool operator==(const Value& a, const Value& b) {
  if (a.repr_.index() != b.repr_.index()) return false;
  switch (a.kind()) {
    case ValueKind::star:
    case ValueKind::nomsg:
      return true;
    case ValueKind::boolean:
      return std::get<bool>(a.repr_) == std::get<bool>(b.repr_);
    case ValueKind::natural:
      return std::get<std::uint64_t>(a.repr_) == std::get<std::uint64_t>(b.repr_);
    case ValueKind::status:
      return std::get<Status>(a.repr_) == std::get<Status>(b.repr_);
    case ValueKind::message:
      return std::get<MsgData>(a.repr_) == std::get<MsgData>(b.repr_);
    case ValueKind::id_list:
      return *std::get<Value::IdsPtr>(a.repr_) == *std::get<Value::IdsPtr>(b.repr_);
    case ValueKind::tuple:
      return *std::get<Value::TuplePtr>(a.repr_) == *std::get<Value::TuplePtr>(b.repr_);
  }
  return false;
}

Value project(const Value& v, std::size_t k) {
  if (v.kind() != ValueKind::tuple) {
    throw SortError("projection on non-tuple value " + v.str());
  }
  if (k == 0 || k > v.arity()) {
    throw std::out_of_range("projection out of range");
  }
  return v.elems()[k - 1];
}

std::ostream& operator<<(std::ostream& os, const Value& v) {
  return os << v.str();
}

std::ostream& operator<<(std::ostream& os, const Sort& s) {
  return os << s.str();
}

}  // namespace syncomp
