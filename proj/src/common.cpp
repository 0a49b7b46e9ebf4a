#include "trendscope/common.h"

namespace trendscope {

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Usage:
            return 1;
        case ErrorKind::Io:
        case ErrorKind::Data:
        case ErrorKind::Config:
            return 2;
        case ErrorKind::Internal:
            return 3;
    }
    return 3;
}

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace trendscope
