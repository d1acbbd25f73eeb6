#include "ocm/ext_real.hpp"

#include <charconv>
#include <system_error>

namespace ocm {

std::string to_string(ExtReal x) {
    if (x.is_pos_inf()) return "inf";
    if (x.is_neg_inf()) return "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x.value());
    return std::string(buf, res.ptr);
}

ExtReal parse_ext_real(const std::string& token) {
    if (token == "inf" || token == "+inf") return ExtReal::pos_inf();
    if (token == "-inf") return ExtReal::neg_inf();
    double v = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw std::invalid_argument("not an extended real: '" + token + "'");
    return ExtReal(v);
}

} // namespace ocm
