#include "csv.hpp"

#include <cstdint>

namespace influence::csv {

Reader::Reader(std::string_view text, std::size_t first_line) : text_(text), line_(first_line) {}

void Reader::skip_rest_of_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') {
        ++pos_;
    }
    if (pos_ < text_.size()) {
        ++pos_;
        ++line_;
    }
}

std::optional<ReadResult> Reader::next() {
    // Skip blank lines.
    while (pos_ < text_.size()) {
        if (text_[pos_] == '\n') {
            ++pos_;
            ++line_;
        } else if (text_[pos_] == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
            pos_ += 2;
            ++line_;
        } else {
            break;
        }
    }
    if (pos_ >= text_.size()) {
        return std::nullopt;
    }

    ReadResult result;
    result.record.line = line_;
    std::string field;

    auto fail = [&](std::string message) {
        result.error = std::move(message);
        skip_rest_of_line();
        return result;
    };

    while (true) {
        field.clear();
        if (pos_ < text_.size() && text_[pos_] == '"') {
            ++pos_;
            bool closed = false;
            while (pos_ < text_.size()) {
                const char c = text_[pos_];
                if (c == '"') {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                        field.push_back('"');
                        pos_ += 2;
                        continue;
                    }
                    ++pos_;
                    closed = true;
                    break;
                }
                if (c == '\n') {
                    ++line_;
                }
                field.push_back(c);
                ++pos_;
            }
            if (!closed) {
                result.error = "unterminated quoted field";
                return result;
            }
            if (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '\n' &&
                !(text_[pos_] == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n')) {
                return fail("unexpected character after closing quote");
            }
        } else {
            while (pos_ < text_.size()) {
                const char c = text_[pos_];
                if (c == ',' || c == '\n' || (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n')) {
                    break;
                }
                if (c == '"') {
                    return fail("stray quote in unquoted field");
                }
                field.push_back(c);
                ++pos_;
            }
        }

        if (!is_valid_utf8(field)) {
            return fail("field is not valid UTF-8");
        }
        result.record.fields.push_back(field);

        if (pos_ >= text_.size()) {
            return result;
        }
        if (text_[pos_] == ',') {
            ++pos_;
            continue;
        }
        // Record terminator: LF or CRLF.
        pos_ += text_[pos_] == '\r' ? 2 : 1;
        ++line_;
        return result;
    }
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i != 0) {
            out.push_back(',');
        }
        out += quote(fields[i]);
    }
    return out;
}

std::string_view strip_bom(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }
    return text;
}

bool is_valid_utf8(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > text.size()) {
            return false;
        }
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xC0) != 0x80) {
                return false;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Overlong forms, surrogates and values past U+10FFFF.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF)) {
            return false;
        }
        i += len;
    }
    return true;
}

} // namespace influence::csv
