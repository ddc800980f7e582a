#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace pairelicit {

// Compensated (Kahan) accumulator. Summation order is fixed by the caller,
// which keeps every estimator deterministic across runs.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Shortest round-trip decimal form of a double. Used for every file we write
// so that reruns are byte-identical and parse back to the same bits.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, bool& ok) {
    // from_chars rejects an explicit plus, but "+1" is the canonical positive
    // label on disk; accept exactly one leading plus before a digit or dot
    if (s.size() >= 2 && s.front() == '+' && (s[1] == '.' || (s[1] >= '0' && s[1] <= '9')))
        s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    ok = (res.ec == std::errc() && res.ptr == s.data() + s.size());
    return v;
}

}  // namespace pairelicit
