#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace perideg {

/// Element of the truncated ring Z + (sum over k>=1 of Z) that the
/// circle-equivariant degree lives in.  One integer coordinate is indexed by
/// the full circle group ("so2"), one by each finite subgroup Z_k.
///
/// Coordinates above the truncation bound K are asserted zero.  A coordinate
/// may also be *undefined*: degenerate indices only define a subset of the
/// Z_k coordinates, and an undefined coordinate must never silently compare
/// equal to zero.  Stored form is canonical: the zk map holds no explicit
/// zeros, no keys above K, and no keys from the undefined set.
class RingElement {
public:
    using Coord = std::int64_t;

    explicit RingElement(int truncation_bound = kDefaultTruncation);

    static RingElement zero(int truncation_bound = kDefaultTruncation);
    /// Multiplicative unit (1, 0, 0, ...).
    static RingElement one(int truncation_bound = kDefaultTruncation);

    Coord so2() const { return so2_; }
    void set_so2(Coord v) { so2_ = v; }

    /// Value of the Z_k coordinate; throws std::logic_error if undefined.
    Coord zk(int k) const;
    bool defined(int k) const { return undefined_.count(k) == 0; }
    void set_zk(int k, Coord v);
    void mark_undefined(int k);

    int truncation_bound() const { return trunc_; }
    const std::map<int, Coord>& zk_coords() const { return zk_; }
    const std::set<int>& undefined_coords() const { return undefined_; }

    /// Equality ignores the truncation bound (metadata, not identity).
    bool operator==(const RingElement& o) const {
        return so2_ == o.so2_ && zk_ == o.zk_ && undefined_ == o.undefined_;
    }
    bool operator!=(const RingElement& o) const { return !(*this == o); }

    std::string str() const;

    static constexpr int kDefaultTruncation = 64;

private:
    void check_key(int k) const;

    Coord so2_ = 0;
    std::map<int, Coord> zk_;
    std::set<int> undefined_;
    int trunc_;
};

/// Coordinate-wise sum.  A result coordinate is undefined iff it is
/// undefined in either operand; the truncation bound is the max of the two.
RingElement add(const RingElement& a, const RingElement& b);

/// Twisted product: so2 coordinate a0*b0, Z_k coordinate a0*b_k + b0*a_k.
/// Undefinedness of a_k or b_k makes the result coordinate undefined.
RingElement star(const RingElement& a, const RingElement& b);

/// Multiplies every defined coordinate by g; undefined coordinates stay
/// undefined.
RingElement scalar_mul(std::int64_t g, const RingElement& a);

/// Left star-fold; the empty product is the unit.
RingElement product_many(const std::vector<RingElement>& elems);

inline RingElement operator+(const RingElement& a, const RingElement& b) { return add(a, b); }
inline RingElement operator*(const RingElement& a, const RingElement& b) { return star(a, b); }
inline RingElement operator*(std::int64_t g, const RingElement& a) { return scalar_mul(g, a); }

struct NonzeroReport {
    bool nonzero = false;
    /// Coordinates with nonzero defined value; 0 stands for the so2
    /// coordinate, k >= 1 for Z_k.
    std::set<int> coords;
    /// Undefined coordinates, reported separately as a warning set.
    std::set<int> undefined;
};

NonzeroReport nonzero_coordinates(const RingElement& a);
bool is_nonzero(const RingElement& a);

}  // namespace perideg
