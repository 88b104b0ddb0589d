// SPDX-License-Identifier: Apache-2.0
//
// Fixed-width integer values with wrapping (pre-0.8 Solidity) semantics.
// A Value is a bit pattern of `width_bits` bits stored in a 256-bit unsigned
// magnitude; signedness only changes how comparisons, division, casts and
// display interpret the pattern (two's complement).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "adfga/diag.hpp"

namespace adfga {

using U256 = boost::multiprecision::uint256_t;

struct IntType {
    bool is_signed = false;
    int width_bits = 256;

    friend bool operator==(const IntType&, const IntType&) = default;

    std::string name() const { return (is_signed ? "int" : "uint") + std::to_string(width_bits); }
};

inline U256 width_mask(int width_bits) {
    if (width_bits >= 256) return ~U256(0);
    return (U256(1) << width_bits) - 1;
}

struct Value {
    IntType type;
    U256 bits;  // invariant: bits == bits & width_mask(type.width_bits)

    friend bool operator==(const Value&, const Value&) = default;
};

inline Value make_value(IntType type, U256 raw) { return Value{type, raw & width_mask(type.width_bits)}; }

inline bool is_negative(const Value& v) {
    return v.type.is_signed && ((v.bits >> (v.type.width_bits - 1)) & 1) != 0;
}

// |v| as an unsigned magnitude (two's complement negate when negative).
inline U256 abs_magnitude(const Value& v) {
    if (!is_negative(v)) return v.bits;
    return (U256(0) - v.bits) & width_mask(v.type.width_bits);
}

// Decimal rendering honoring the signed interpretation ("-1" for int8 0xFF).
inline std::string to_decimal(const Value& v) {
    if (is_negative(v)) return "-" + abs_magnitude(v).str();
    return v.bits.str();
}

namespace arith {

inline Value add(const Value& a, const Value& b) { return make_value(a.type, a.bits + b.bits); }
inline Value sub(const Value& a, const Value& b) { return make_value(a.type, a.bits - b.bits); }
inline Value mul(const Value& a, const Value& b) { return make_value(a.type, a.bits * b.bits); }
inline Value neg(const Value& a) { return make_value(a.type, U256(0) - a.bits); }

// Truncating division, sign of remainder follows the dividend. Callers must
// reject b == 0 beforehand (the interpreter turns it into a Fault).
inline Value div(const Value& a, const Value& b) {
    if (!a.type.is_signed) return make_value(a.type, a.bits / b.bits);
    U256 q = abs_magnitude(a) / abs_magnitude(b);
    bool negate = is_negative(a) != is_negative(b);
    return make_value(a.type, negate ? U256(0) - q : q);
}

inline Value rem(const Value& a, const Value& b) {
    if (!a.type.is_signed) return make_value(a.type, a.bits % b.bits);
    U256 r = abs_magnitude(a) % abs_magnitude(b);
    return make_value(a.type, is_negative(a) ? U256(0) - r : r);
}

inline bool lt(const Value& a, const Value& b) {
    if (!a.type.is_signed) return a.bits < b.bits;
    // bias by 2^(w-1) to order two's-complement patterns as unsigned
    U256 bias = U256(1) << (a.type.width_bits - 1);
    U256 m = width_mask(a.type.width_bits);
    return ((a.bits + bias) & m) < ((b.bits + bias) & m);
}

inline bool eq(const Value& a, const Value& b) { return a.bits == b.bits; }

// Truncate or sign/zero-extend the bit pattern into the target type.
inline Value cast(const Value& v, IntType target) {
    if (target.width_bits <= v.type.width_bits) return make_value(target, v.bits);
    U256 bits = v.bits;
    if (is_negative(v)) bits |= width_mask(target.width_bits) & ~width_mask(v.type.width_bits);
    return make_value(target, bits);
}

}  // namespace arith

// Parses a decimal literal; rejects anything that does not fit in 256 bits.
inline U256 parse_decimal(const std::string& digits, SourcePos pos) {
    U256 acc = 0;
    const U256 limit = ~U256(0);
    for (char c : digits) {
        int d = c - '0';
        if (acc > (limit - d) / 10)
            throw LexError(pos, "decimal literal does not fit in 256 bits");
        acc = acc * 10 + d;
    }
    return acc;
}

}  // namespace adfga
