#include "table_fixture.hpp"

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace recom::testing {

Rational decimal(const char* text) {
    std::string s(text);
    bool negative = false;
    std::size_t pos = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        pos = 1;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool after_point = false;
    for (; pos < s.size(); ++pos) {
        if (s[pos] == '.') {
            after_point = true;
            continue;
        }
        if (s[pos] < '0' || s[pos] > '9') throw std::invalid_argument("bad decimal: " + s);
        num = num * 10 + (s[pos] - '0');
        if (after_point) den *= 10;
    }
    return Rational(negative ? -num : num, den);
}

}  // namespace recom::testing
