#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace influence::csv {

struct Record {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// Outcome of reading one record. On a parse failure `error` is set and
/// `fields` holds only the fields completed before the fault.
struct ReadResult {
    Record record;
    std::optional<std::string> error;
};

/// RFC 4180 record reader over an in-memory buffer. Quoted fields may
/// contain separators, doubled quotes and line breaks; CRLF and LF are both
/// accepted as record terminators. Blank lines are skipped. On a malformed
/// record the reader resynchronizes at the next line.
class Reader {
public:
    Reader(std::string_view text, std::size_t first_line = 1);

    std::optional<ReadResult> next();

private:
    void skip_rest_of_line();

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

/// Quotes a field when it contains a separator, quote or line break.
std::string quote(std::string_view field);

/// Joins fields into one CSV line (without terminator).
std::string join(const std::vector<std::string>& fields);

/// Removes a leading UTF-8 byte order mark.
std::string_view strip_bom(std::string_view text);

bool is_valid_utf8(std::string_view text);

} // namespace influence::csv
