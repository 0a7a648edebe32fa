#include "hwmi/rational.hpp"

#include <cctype>
#include <sstream>

namespace hwmi {

Rat pow_int(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    bool neg = e < 0;
    unsigned long k = neg ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rat acc(1), b = base;
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    if (neg) acc = Rat(1) / acc;
    return acc;
}

std::optional<Rat> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    size_t i = 0;
    bool neg = false;
    if (s[i] == '-' || s[i] == '+') {
        neg = s[i] == '-';
        ++i;
    }
    if (i >= s.size()) return std::nullopt;

    auto digits = [&](size_t& p) {
        size_t start = p;
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
        return s.substr(start, p - start);
    };

    std::string ip = digits(i);
    Rat value;
    if (i < s.size() && s[i] == '.') {
        ++i;
        std::string fp = digits(i);
        if (ip.empty() && fp.empty()) return std::nullopt;
        BigInt num(ip.empty() ? "0" : ip);
        BigInt den(1);
        for (char c : fp) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
        value = Rat(num, den);
    } else if (i < s.size() && s[i] == '/') {
        ++i;
        std::string dp = digits(i);
        if (ip.empty() || dp.empty()) return std::nullopt;
        BigInt den(dp);
        if (den == 0) return std::nullopt;
        value = Rat(BigInt(ip), den);
    } else {
        if (ip.empty()) return std::nullopt;
        value = Rat(BigInt(ip));
    }
    if (i != s.size()) return std::nullopt;
    if (neg) value = -value;
    return value;
}

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::string rat_to_decimal_string(const Rat& r) {
    BigInt num = numerator(r), den = denominator(r);
    if (den == 1) return num.str();
    // den = 2^a * 5^b terminates in decimal
    BigInt d = den;
    int shift = 0;
    while (d % 2 == 0) { d /= 2; ++shift; }
    while (d % 5 == 0) { d /= 5; ++shift; }
    if (d != 1 || shift > 18) {
        std::ostringstream os;
        os << r;
        return os.str();
    }
    bool neg = num < 0;
    if (neg) num = -num;
    // scale numerator to 10^shift denominator
    BigInt scaled = num;
    BigInt pow10(1);
    for (int i = 0; i < shift; ++i) pow10 *= 10;
    scaled = num * pow10 / den;
    std::string s = scaled.str();
    while (static_cast<int>(s.size()) <= shift) s.insert(s.begin(), '0');
    s.insert(s.end() - shift, '.');
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    if (neg) s.insert(s.begin(), '-');
    return s;
}

} // namespace hwmi
