#pragma once
// Shared character scanner for the three text formats. Tracks 1-based
// line/column positions for diagnostics.

#include <cctype>
#include <string>

#include "satis/diagnostics.hpp"

namespace satis::detail {

class Scanner {
public:
    explicit Scanner(const std::string& text) : text_(text) {}

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return eof() ? '\0' : text_[pos_]; }
    char peek2() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    SourceSpan span() const { return {line_, column_}; }

    void skip_ws_and_comments() {
        while (!eof()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    // Whitespace only; keeps '#' comments visible to the caller.
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    bool match(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    static bool is_local_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_local_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }

    // Reads a local name ([A-Za-z_][A-Za-z0-9_-]*); empty string if none.
    std::string read_local() {
        std::string out;
        if (!eof() && is_local_start(peek())) {
            out += advance();
            while (!eof() && is_local_char(peek())) out += advance();
        }
        return out;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

}  // namespace satis::detail
