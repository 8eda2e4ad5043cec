#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

namespace starq {

/// Parse failure with 1-based line/column of the offending character.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                             std::to_string(column_)),
          line(line_),
          column(column_) {}
};

/// Character cursor over a string, tracking line/column for error reporting.
class TextCursor {
  public:
    explicit TextCursor(std::string text, int line = 1, int column = 1)
        : text_(std::move(text)), line_(line), col_(column) {}

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return eof() ? '\0' : text_[pos_]; }

    char get() {
        char c = peek();
        if (!eof()) {
            ++pos_;
            if (c == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
        return c;
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n')) get();
    }

    bool try_consume(char c) {
        skip_ws();
        if (peek() == c) {
            get();
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& what) {
        skip_ws();
        if (peek() != c) fail("expected '" + std::string(1, c) + "' " + what);
        get();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    int line() const { return line_; }
    int column() const { return col_; }

  private:
    std::string text_;
    std::size_t pos_ = 0;
    int line_;
    int col_;
};

}  // namespace starq
