#ifndef VIRGEO_BIGINT_HPP
#define VIRGEO_BIGINT_HPP

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "virgeo/error.hpp"

namespace virgeo {

/// Arbitrary-precision signed integer, sign + magnitude in base 2^32.
/// Only what exact rational arithmetic needs: ring ops, divmod, gcd,
/// decimal conversion.  Magnitudes in this library are usually one or two
/// limbs; the schoolbook algorithms are the right tool.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) {
        if (v < 0) { neg_ = true; }
        unsigned long long m = neg_ ? ~static_cast<unsigned long long>(v) + 1ull
                                    : static_cast<unsigned long long>(v);
        while (m) { limbs_.push_back(static_cast<uint32_t>(m & 0xffffffffull)); m >>= 32; }
    }
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt from_decimal(const std::string& s) {
        BigInt r;
        size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) { neg = s[i] == '-'; ++i; }
        if (i == s.size()) raise(errc::bad_input, "empty integer literal");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') raise(errc::bad_input, "bad digit in integer literal");
            r.mul_small(10);
            r.add_small(static_cast<uint32_t>(s[i] - '0'));
        }
        r.neg_ = neg && !r.is_zero();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return neg_; }
    int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

    /// Value as double (may overflow to inf for huge magnitudes).
    double to_double() const {
        double v = 0.0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
        return neg_ ? -v : v;
    }

    bool fits_int64() const {
        if (limbs_.size() > 2) return false;
        unsigned long long m = mag64();
        return neg_ ? m <= 0x8000000000000000ull : m < 0x8000000000000000ull;
    }
    long long to_int64() const {
        unsigned long long m = mag64();
        return neg_ ? -static_cast<long long>(m - 1) - 1 : static_cast<long long>(m);
    }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_) return a.neg_;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.neg_ ? c > 0 : c < 0;
    }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        BigInt r;
        if (a.neg_ == b.neg_) {
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_ && !r.limbs_.empty();
        } else {
            int c = cmp_mag(a.limbs_, b.limbs_);
            if (c == 0) return r;
            if (c > 0) { r.limbs_ = sub_mag(a.limbs_, b.limbs_); r.neg_ = a.neg_; }
            else       { r.limbs_ = sub_mag(b.limbs_, a.limbs_); r.neg_ = b.neg_; }
        }
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }
    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        BigInt r;
        if (a.is_zero() || b.is_zero()) return r;
        r.limbs_ = mul_mag(a.limbs_, b.limbs_);
        r.neg_ = a.neg_ != b.neg_;
        return r;
    }
    BigInt& operator+=(const BigInt& b) { *this = *this + b; return *this; }
    BigInt& operator-=(const BigInt& b) { *this = *this - b; return *this; }
    BigInt& operator*=(const BigInt& b) { *this = *this * b; return *this; }

    /// Truncated division: quotient rounds toward zero, remainder has the
    /// dividend's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) raise(errc::bad_input, "integer division by zero");
        q = BigInt();
        r = BigInt();
        if (cmp_mag(a.limbs_, b.limbs_) < 0) { r = a; return; }
        divmod_mag(a.limbs_, b.limbs_, q.limbs_, r.limbs_);
        q.neg_ = !q.limbs_.empty() && (a.neg_ != b.neg_);
        r.neg_ = !r.limbs_.empty() && a.neg_;
    }
    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.neg_ = false;
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = false;
        b.neg_ = false;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a;
    }

    std::string to_decimal() const {
        if (is_zero()) return "0";
        std::string digits;
        std::vector<uint32_t> m = limbs_;
        while (!m.empty()) {
            uint64_t rem = 0;
            for (size_t i = m.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | m[i];
                m[i] = static_cast<uint32_t>(cur / 1000000000ull);
                rem = cur % 1000000000ull;
            }
            while (!m.empty() && m.back() == 0) m.pop_back();
            for (int d = 0; d < 9; ++d) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        std::string out;
        if (neg_) out.push_back('-');
        out.append(digits.rbegin(), digits.rend());
        return out;
    }

private:
    unsigned long long mag64() const {
        unsigned long long m = 0;
        if (limbs_.size() > 1) m = static_cast<unsigned long long>(limbs_[1]) << 32;
        if (!limbs_.empty()) m |= limbs_[0];
        return m;
    }

    void mul_small(uint32_t f) {
        uint64_t carry = 0;
        for (auto& l : limbs_) {
            uint64_t cur = static_cast<uint64_t>(l) * f + carry;
            l = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    }
    void add_small(uint32_t v) {
        uint64_t carry = v;
        for (size_t i = 0; carry && i < limbs_.size(); ++i) {
            uint64_t cur = limbs_[i] + carry;
            limbs_[i] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    }

    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        const auto& big = a.size() >= b.size() ? a : b;
        const auto& small = a.size() >= b.size() ? b : a;
        std::vector<uint32_t> r(big.size());
        uint64_t carry = 0;
        for (size_t i = 0; i < big.size(); ++i) {
            uint64_t cur = static_cast<uint64_t>(big[i]) + (i < small.size() ? small[i] : 0) + carry;
            r[i] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<uint32_t>(carry));
        return r;
    }
    // precondition: |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r(a.size());
        int64_t borrow = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            int64_t cur = static_cast<int64_t>(a[i]) - (i < b.size() ? b[i] : 0) - borrow;
            borrow = cur < 0;
            if (cur < 0) cur += 1ll << 32;
            r[i] = static_cast<uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r(a.size() + b.size(), 0);
        for (size_t i = 0; i < a.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < b.size(); ++j) {
                uint64_t cur = static_cast<uint64_t>(a[i]) * b[j] + r[i + j] + carry;
                r[i + j] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            r[i + b.size()] = static_cast<uint32_t>(carry);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // Knuth algorithm D on normalized magnitudes; |a| >= |b|, b nonzero.
    static void divmod_mag(std::vector<uint32_t> a, std::vector<uint32_t> b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
        if (b.size() == 1) {
            uint64_t rem = 0;
            q.assign(a.size(), 0);
            for (size_t i = a.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | a[i];
                q[i] = static_cast<uint32_t>(cur / b[0]);
                rem = cur % b[0];
            }
            while (!q.empty() && q.back() == 0) q.pop_back();
            r.clear();
            if (rem) r.push_back(static_cast<uint32_t>(rem));
            return;
        }
        int shift = 0;
        for (uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
        auto shl = [shift](std::vector<uint32_t> v) {
            if (shift == 0) return v;
            uint32_t carry = 0;
            for (auto& l : v) {
                uint32_t nc = l >> (32 - shift);
                l = (l << shift) | carry;
                carry = nc;
            }
            if (carry) v.push_back(carry);
            return v;
        };
        a = shl(std::move(a));
        b = shl(std::move(b));
        size_t n = b.size(), m = a.size() - n;
        a.push_back(0);
        q.assign(m + 1, 0);
        for (size_t j = m + 1; j-- > 0;) {
            uint64_t top = (static_cast<uint64_t>(a[j + n]) << 32) | a[j + n - 1];
            uint64_t qhat = top / b[n - 1];
            uint64_t rhat = top % b[n - 1];
            while (qhat >= (1ull << 32) ||
                   qhat * b[n - 2] > ((rhat << 32) | a[j + n - 2])) {
                --qhat;
                rhat += b[n - 1];
                if (rhat >= (1ull << 32)) break;
            }
            // multiply-subtract, with add-back on underflow
            int64_t borrow = 0;
            uint64_t carry = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t p = qhat * b[i] + carry;
                carry = p >> 32;
                int64_t cur = static_cast<int64_t>(a[i + j]) - static_cast<int64_t>(p & 0xffffffffull) - borrow;
                borrow = cur < 0;
                if (cur < 0) cur += 1ll << 32;
                a[i + j] = static_cast<uint32_t>(cur);
            }
            int64_t cur = static_cast<int64_t>(a[j + n]) - static_cast<int64_t>(carry) - borrow;
            if (cur < 0) {
                cur += 1ll << 32;
                --qhat;
                uint64_t c2 = 0;
                for (size_t i = 0; i < n; ++i) {
                    uint64_t s = static_cast<uint64_t>(a[i + j]) + b[i] + c2;
                    a[i + j] = static_cast<uint32_t>(s);
                    c2 = s >> 32;
                }
                cur += static_cast<int64_t>(c2);
                cur &= 0xffffffffll;
            }
            a[j + n] = static_cast<uint32_t>(cur);
            q[j] = static_cast<uint32_t>(qhat);
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        a.resize(n);
        if (shift) {
            uint32_t carry = 0;
            for (size_t i = a.size(); i-- > 0;) {
                uint32_t nc = a[i] << (32 - shift);
                a[i] = (a[i] >> shift) | carry;
                carry = nc;
            }
        }
        while (!a.empty() && a.back() == 0) a.pop_back();
        r = std::move(a);
    }

    bool neg_ = false;
    std::vector<uint32_t> limbs_; // little-endian, no trailing zero limbs
};

} // namespace virgeo

#endif
