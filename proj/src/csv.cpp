#include "pdbuck/csv.hpp"

#include <charconv>
#include <cmath>

#include "pdbuck/errors.hpp"

namespace pdbuck {

namespace {

std::string to_chars_general(double x, int precision) {
    char buf[64];
    std::to_chars_result r =
        precision > 0
            ? std::to_chars(buf, buf + sizeof(buf), x,
                            std::chars_format::general, precision)
            : std::to_chars(buf, buf + sizeof(buf), x);
    if (r.ec != std::errc())
        throw Error("numeric formatting failed");
    return std::string(buf, r.ptr);
}

} // namespace

std::string format_sig17(double x) {
    if (!std::isfinite(x)) throw NonFinite("cannot format a non-finite value");
    return to_chars_general(x, 17);
}

std::string format_roundtrip(double x) {
    if (!std::isfinite(x)) throw NonFinite("cannot format a non-finite value");
    return to_chars_general(x, 0);
}

} // namespace pdbuck
