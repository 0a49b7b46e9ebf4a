#include "trendscope/csv.h"

namespace trendscope::csv {

std::vector<Record> parse(std::string_view text) {
    std::vector<Record> records;
    std::size_t i = 0;
    int line = 1;
    const std::size_t n = text.size();

    while (i < n) {
        Record rec;
        rec.line = line;
        std::string field;
        bool in_quotes = false;
        bool field_was_quoted = false;
        bool done = false;

        while (!done) {
            if (i >= n) {
                if (in_quotes) rec.well_formed = false;
                rec.fields.push_back(std::move(field));
                done = true;
                break;
            }
            char c = text[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < n && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                    } else {
                        in_quotes = false;
                        ++i;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                    ++i;
                }
                continue;
            }
            switch (c) {
                case '"':
                    if (field.empty() && !field_was_quoted) {
                        in_quotes = true;
                        field_was_quoted = true;
                    } else {
                        rec.well_formed = false;
                        field.push_back(c);
                    }
                    ++i;
                    break;
                case ',':
                    rec.fields.push_back(std::move(field));
                    field.clear();
                    field_was_quoted = false;
                    ++i;
                    break;
                case '\r':
                    ++i;
                    break;
                case '\n':
                    rec.fields.push_back(std::move(field));
                    ++line;
                    ++i;
                    done = true;
                    break;
                default:
                    if (field_was_quoted) rec.well_formed = false;
                    field.push_back(c);
                    ++i;
            }
        }
        // Skip blank lines entirely.
        if (rec.fields.size() == 1 && rec.fields[0].empty() && rec.well_formed) continue;
        records.push_back(std::move(rec));
    }
    return records;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

}  // namespace trendscope::csv
