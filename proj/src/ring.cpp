#include "perideg/ring.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace perideg {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("ring coordinate overflow in +");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("ring coordinate overflow in *");
    return r;
}

}  // namespace

RingElement::RingElement(int truncation_bound) : trunc_(truncation_bound) {
    if (truncation_bound < 1) throw std::invalid_argument("RingElement: truncation bound must be >= 1");
}

RingElement RingElement::zero(int truncation_bound) { return RingElement(truncation_bound); }

RingElement RingElement::one(int truncation_bound) {
    RingElement e(truncation_bound);
    e.so2_ = 1;
    return e;
}

void RingElement::check_key(int k) const {
    if (k < 1) throw std::invalid_argument("RingElement: Z_k coordinate index must be >= 1");
    if (k > trunc_)
        throw std::invalid_argument("RingElement: coordinate " + std::to_string(k) +
                                    " above truncation bound " + std::to_string(trunc_));
}

RingElement::Coord RingElement::zk(int k) const {
    if (k < 1) throw std::invalid_argument("RingElement: Z_k coordinate index must be >= 1");
    if (undefined_.count(k))
        throw std::logic_error("RingElement: coordinate Z_" + std::to_string(k) + " is undefined");
    auto it = zk_.find(k);
    return it == zk_.end() ? 0 : it->second;
}

void RingElement::set_zk(int k, Coord v) {
    check_key(k);
    undefined_.erase(k);
    if (v == 0)
        zk_.erase(k);
    else
        zk_[k] = v;
}

void RingElement::mark_undefined(int k) {
    check_key(k);
    zk_.erase(k);
    undefined_.insert(k);
}

std::string RingElement::str() const {
    std::ostringstream os;
    os << "(" << so2_;
    for (const auto& [k, v] : zk_) os << ", Z" << k << ":" << v;
    for (int k : undefined_) os << ", Z" << k << ":?";
    os << ")";
    return os.str();
}

RingElement add(const RingElement& a, const RingElement& b) {
    RingElement r(std::max(a.truncation_bound(), b.truncation_bound()));
    r.set_so2(checked_add(a.so2(), b.so2()));
    for (const auto& [k, v] : a.zk_coords()) r.set_zk(k, v);
    for (const auto& [k, v] : b.zk_coords()) {
        if (r.defined(k)) r.set_zk(k, checked_add(r.zk(k), v));
    }
    for (int k : a.undefined_coords()) r.mark_undefined(k);
    for (int k : b.undefined_coords()) r.mark_undefined(k);
    return r;
}

RingElement star(const RingElement& a, const RingElement& b) {
    RingElement r(std::max(a.truncation_bound(), b.truncation_bound()));
    r.set_so2(checked_mul(a.so2(), b.so2()));
    for (const auto& [k, v] : a.zk_coords()) r.set_zk(k, checked_mul(b.so2(), v));
    for (const auto& [k, v] : b.zk_coords()) {
        if (r.defined(k)) r.set_zk(k, checked_add(r.zk(k), checked_mul(a.so2(), v)));
    }
    for (int k : a.undefined_coords()) r.mark_undefined(k);
    for (int k : b.undefined_coords()) r.mark_undefined(k);
    return r;
}

RingElement scalar_mul(std::int64_t g, const RingElement& a) {
    RingElement r(a.truncation_bound());
    r.set_so2(checked_mul(g, a.so2()));
    for (const auto& [k, v] : a.zk_coords()) r.set_zk(k, checked_mul(g, v));
    for (int k : a.undefined_coords()) r.mark_undefined(k);
    return r;
}

RingElement product_many(const std::vector<RingElement>& elems) {
    if (elems.empty()) return RingElement::one();
    RingElement r = elems.front();
    for (size_t i = 1; i < elems.size(); ++i) r = star(r, elems[i]);
    return r;
}

NonzeroReport nonzero_coordinates(const RingElement& a) {
    NonzeroReport rep;
    if (a.so2() != 0) rep.coords.insert(0);
    for (const auto& [k, v] : a.zk_coords())
        if (v != 0) rep.coords.insert(k);
    rep.undefined = a.undefined_coords();
    rep.nonzero = !rep.coords.empty();
    return rep;
}

bool is_nonzero(const RingElement& a) { return nonzero_coordinates(a).nonzero; }

}  // namespace perideg
