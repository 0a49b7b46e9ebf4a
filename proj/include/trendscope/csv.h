#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace trendscope::csv {

struct Record {
    std::vector<std::string> fields;
    int line = 0;  // 1-based physical line where the record starts
    bool well_formed = true;
};

/// RFC 4180 reader: quoted fields may contain commas, CRLF and doubled quotes.
/// A record with an unterminated quote or stray quote is returned with
/// `well_formed == false` instead of aborting the whole document.
std::vector<Record> parse(std::string_view text);

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace trendscope::csv
