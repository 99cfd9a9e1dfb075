#include "stclone/lexnorm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <span>

namespace stclone {

namespace {

bool is_ident_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (is_space(s.front()) || s.front() == '\n')) s.remove_prefix(1);
    while (!s.empty() && (is_space(s.back()) || s.back() == '\n')) s.remove_suffix(1);
    return s;
}

bool starts_with_at(std::string_view line, std::size_t pos, std::string_view what) {
    return line.substr(pos).starts_with(what);
}

// Longest match first.
constexpr std::array<std::string_view, 9> kStPuncts = {
    ":=", "=>", "<=", ">=", "<>", "**", "..", "?=", "^",
};

constexpr std::array<std::string_view, 41> kCppPuncts = {
    "<=>", ">>=", "<<=", "->*", "...", "::", "->", "++", "--", "<<", ">>",
    "<=",  ">=",  "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=", "%=",
    "&=",  "|=",  "^=",  ".*",  "##",  "<:", ":>", "<%", "%>", "(",  ")",
    "[",   "]",   "{",   "}",   ";",   ",",  ".",  ":",
};

const std::unordered_set<std::string>& st_time_prefixes() {
    static const std::unordered_set<std::string> prefixes = {
        "T",   "TIME", "LT",  "LTIME", "D",           "DATE",          "LD",
        "LDATE", "TOD", "TIME_OF_DAY", "LTOD",         "LTIME_OF_DAY",  "DT",
        "DATE_AND_TIME", "LDT", "LDATE_AND_TIME",
    };
    return prefixes;
}

const std::unordered_set<std::string>& st_typed_literal_prefixes() {
    static const std::unordered_set<std::string> prefixes = {
        "BOOL", "BYTE",  "WORD",  "DWORD", "LWORD", "SINT",   "INT",
        "DINT", "LINT",  "USINT", "UINT",  "UDINT", "ULINT",  "REAL",
        "LREAL", "STRING", "WSTRING", "CHAR", "WCHAR",
    };
    return prefixes;
}

struct ScanState {
    int comment_depth = 0;
    std::size_t comment_pair = 0;
    bool in_raw_string = false;
    std::string raw_terminator;
    bool pp_continuation = false;
};

class LineScanner {
public:
    LineScanner(std::string_view line, std::uint32_t line_no, ScanState& state,
                const LanguageProfile& profile, std::vector<Token>& out)
        : line_(line), line_no_(line_no), state_(state), profile_(profile), out_(out) {}

    void run() {
        const bool cpp = profile_.language_id == LanguageId::CPP;
        bool continued_pp = state_.pp_continuation;
        state_.pp_continuation = false;

        while (pos_ < line_.size()) {
            if (state_.comment_depth > 0) {
                skip_block_comment();
                continue;
            }
            if (state_.in_raw_string) {
                continue_raw_string();
                continue;
            }
            if (cpp && continued_pp && out_.empty()) {
                scan_preprocessor();
                return;
            }
            const auto c = static_cast<unsigned char>(line_[pos_]);
            if (is_space(c)) {
                ++pos_;
                continue;
            }
            if (starts_line_comment()) return;
            if (starts_block_comment()) continue;
            if (cpp && c == '#' && out_.empty()) {
                scan_preprocessor();
                return;
            }
            if (profile_.pragma_delimiters && starts_with_at(line_, pos_, profile_.pragma_delimiters->first)) {
                scan_pragma();
                continue;
            }
            if (cpp) {
                scan_cpp_lexeme();
            } else {
                scan_st_lexeme();
            }
        }
    }

private:
    void emit(TokenKind kind, std::string_view text) {
        out_.push_back(Token{kind, std::string(text), line_no_});
    }

    bool starts_line_comment() {
        for (const auto& opener : profile_.line_comment_openers) {
            if (starts_with_at(line_, pos_, opener)) {
                pos_ = line_.size();
                return true;
            }
        }
        return false;
    }

    bool starts_block_comment() {
        for (std::size_t i = 0; i < profile_.block_comment_delimiters.size(); ++i) {
            const auto& opener = profile_.block_comment_delimiters[i].first;
            if (starts_with_at(line_, pos_, opener)) {
                state_.comment_depth = 1;
                state_.comment_pair = i;
                pos_ += opener.size();
                return true;
            }
        }
        return false;
    }

    void skip_block_comment() {
        const auto& [opener, closer] = profile_.block_comment_delimiters[state_.comment_pair];
        while (pos_ < line_.size() && state_.comment_depth > 0) {
            if (starts_with_at(line_, pos_, closer)) {
                --state_.comment_depth;
                pos_ += closer.size();
            } else if (profile_.nested_block_comments && starts_with_at(line_, pos_, opener)) {
                ++state_.comment_depth;
                pos_ += opener.size();
            } else {
                ++pos_;
            }
        }
    }

    void continue_raw_string() {
        const auto end = line_.find(state_.raw_terminator, pos_);
        std::string_view fragment;
        if (end == std::string_view::npos) {
            fragment = line_.substr(pos_);
            pos_ = line_.size();
        } else {
            const auto stop = end + state_.raw_terminator.size();
            fragment = line_.substr(pos_, stop - pos_);
            pos_ = stop;
            state_.in_raw_string = false;
        }
        fragment = trim(fragment);
        if (!fragment.empty()) emit(TokenKind::StringLiteral, fragment);
    }

    // Directive text with comments removed; one token per physical line.
    void scan_preprocessor() {
        std::string text;
        const auto& [block_open, block_close] = profile_.block_comment_delimiters.front();
        while (pos_ < line_.size()) {
            if (starts_line_comment()) break;
            if (starts_with_at(line_, pos_, block_open)) {
                const auto end = line_.find(block_close, pos_ + block_open.size());
                if (end == std::string_view::npos) {
                    state_.comment_depth = 1;
                    state_.comment_pair = 0;
                    pos_ = line_.size();
                    break;
                }
                text.push_back(' ');
                pos_ = end + block_close.size();
                continue;
            }
            const char c = line_[pos_];
            if (c == '"' || c == '\'') {
                const auto start = pos_;
                skip_quoted(c, '\\');
                text.append(line_.substr(start, pos_ - start));
                continue;
            }
            text.push_back(c);
            ++pos_;
        }
        const auto body = trim(text);
        if (!body.empty()) emit(TokenKind::PreprocessorText, body);
        state_.pp_continuation = state_.comment_depth == 0 && !body.empty() && body.back() == '\\';
    }

    void scan_pragma() {
        const auto& closer = profile_.pragma_delimiters->second;
        const auto start = pos_;
        const auto end = line_.find(closer, pos_ + profile_.pragma_delimiters->first.size());
        pos_ = end == std::string_view::npos ? line_.size() : end + closer.size();
        const auto body = trim(line_.substr(start, pos_ - start));
        emit(TokenKind::Pragma, body);
    }

    // Advances past a quoted literal starting at pos_; unterminated runs to end of line.
    void skip_quoted(char quote, char escape) {
        ++pos_;
        while (pos_ < line_.size()) {
            const char c = line_[pos_];
            if (c == escape && pos_ + 1 < line_.size()) {
                pos_ += 2;
                continue;
            }
            ++pos_;
            if (c == quote) return;
        }
    }

    bool scan_placeholder() {
        if (line_[pos_] != '$' || pos_ + 1 >= line_.size() ||
            !is_ident_char(static_cast<unsigned char>(line_[pos_ + 1])))
            return false;
        const auto start = pos_++;
        while (pos_ < line_.size() && is_ident_char(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        const auto text = line_.substr(start, pos_ - start);
        emit(text == kLiteralPlaceholder ? TokenKind::NumberLiteral : TokenKind::Identifier, text);
        return true;
    }

    std::string_view scan_word() {
        const auto start = pos_;
        while (pos_ < line_.size() && is_ident_char(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        return line_.substr(start, pos_ - start);
    }

    void scan_punct(std::span<const std::string_view> puncts) {
        for (const auto p : puncts) {
            if (starts_with_at(line_, pos_, p)) {
                emit(TokenKind::Punct, p);
                pos_ += p.size();
                return;
            }
        }
        emit(TokenKind::Punct, line_.substr(pos_, 1));
        ++pos_;
    }

    // ---- Structured Text ----

    void scan_st_lexeme() {
        const auto c = static_cast<unsigned char>(line_[pos_]);
        const auto start = pos_;
        if (scan_placeholder()) return;
        if (is_ident_start(c)) {
            const auto word = scan_word();
            if (pos_ < line_.size() && line_[pos_] == '#') {
                const auto prefix = upper(word);
                if (st_time_prefixes().contains(prefix)) {
                    ++pos_;
                    scan_st_time_body();
                    emit(TokenKind::TimeLiteral, line_.substr(start, pos_ - start));
                    return;
                }
                if (st_typed_literal_prefixes().contains(prefix)) {
                    ++pos_;
                    if (pos_ < line_.size() && (line_[pos_] == '\'' || line_[pos_] == '"')) {
                        skip_quoted(line_[pos_], '$');
                        emit(TokenKind::StringLiteral, line_.substr(start, pos_ - start));
                    } else {
                        scan_st_number_body();
                        emit(TokenKind::NumberLiteral, line_.substr(start, pos_ - start));
                    }
                    return;
                }
            }
            emit(profile_.is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, word);
            return;
        }
        if (is_digit(c)) {
            scan_st_number_body();
            emit(TokenKind::NumberLiteral, line_.substr(start, pos_ - start));
            return;
        }
        if (c == '\'' || c == '"') {
            skip_quoted(static_cast<char>(c), '$');
            emit(TokenKind::StringLiteral, line_.substr(start, pos_ - start));
            return;
        }
        if (c == '%' && pos_ + 1 < line_.size() && std::isalpha(static_cast<unsigned char>(line_[pos_ + 1]))) {
            // Direct address such as %IX1.0
            ++pos_;
            while (pos_ < line_.size()) {
                const auto d = static_cast<unsigned char>(line_[pos_]);
                const bool dot_then_digit = d == '.' && pos_ + 1 < line_.size() &&
                                            is_digit(static_cast<unsigned char>(line_[pos_ + 1]));
                if (!(is_ident_char(d) || dot_then_digit || d == '*')) break;
                ++pos_;
            }
            emit(TokenKind::Identifier, line_.substr(start, pos_ - start));
            return;
        }
        scan_punct(kStPuncts);
    }

    void scan_st_time_body() {
        if (pos_ < line_.size() && (line_[pos_] == '+' || line_[pos_] == '-')) ++pos_;
        while (pos_ < line_.size()) {
            const auto d = static_cast<unsigned char>(line_[pos_]);
            if (!(std::isalnum(d) || d == '_' || d == '.' || d == ':' || d == '-')) break;
            ++pos_;
        }
    }

    // Decimal, based (16#FF), real with exponent, or the body after a type prefix.
    void scan_st_number_body() {
        if (pos_ < line_.size() && (line_[pos_] == '+' || line_[pos_] == '-')) ++pos_;
        while (pos_ < line_.size()) {
            const auto d = static_cast<unsigned char>(line_[pos_]);
            if (std::isalnum(d) || d == '_' || d == '#') {
                ++pos_;
                const bool exponent = (d == 'e' || d == 'E') && pos_ < line_.size() &&
                                      (line_[pos_] == '+' || line_[pos_] == '-') &&
                                      pos_ + 1 < line_.size() &&
                                      is_digit(static_cast<unsigned char>(line_[pos_ + 1]));
                if (exponent) ++pos_;
                continue;
            }
            // A dot belongs to the number only when followed by a digit (1..10 is a range).
            if (d == '.' && pos_ + 1 < line_.size() &&
                is_digit(static_cast<unsigned char>(line_[pos_ + 1]))) {
                ++pos_;
                continue;
            }
            break;
        }
    }

    // ---- C / C++ ----

    void scan_cpp_lexeme() {
        const auto c = static_cast<unsigned char>(line_[pos_]);
        const auto start = pos_;
        if (scan_placeholder()) return;
        if (is_ident_start(c)) {
            const auto word = scan_word();
            if (pos_ < line_.size() && scan_cpp_prefixed_literal(word, start)) return;
            emit(profile_.is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, word);
            return;
        }
        if (is_digit(c) || (c == '.' && pos_ + 1 < line_.size() &&
                            is_digit(static_cast<unsigned char>(line_[pos_ + 1])))) {
            scan_pp_number();
            emit(TokenKind::NumberLiteral, line_.substr(start, pos_ - start));
            return;
        }
        if (c == '"' || c == '\'') {
            skip_quoted(static_cast<char>(c), '\\');
            emit(TokenKind::StringLiteral, line_.substr(start, pos_ - start));
            return;
        }
        scan_punct(kCppPuncts);
    }

    bool scan_cpp_prefixed_literal(std::string_view word, std::size_t start) {
        static const std::unordered_set<std::string_view> plain = {"L", "u", "U", "u8"};
        static const std::unordered_set<std::string_view> raw = {"R", "LR", "uR", "UR", "u8R"};
        const char next = line_[pos_];
        if (plain.contains(word) && (next == '"' || next == '\'')) {
            skip_quoted(next, '\\');
            emit(TokenKind::StringLiteral, line_.substr(start, pos_ - start));
            return true;
        }
        if (!raw.contains(word) || next != '"') return false;
        const auto paren = line_.find('(', pos_ + 1);
        if (paren == std::string_view::npos || paren - pos_ - 1 > 16) return false;
        const auto delim = line_.substr(pos_ + 1, paren - pos_ - 1);
        if (delim.find_first_of(" \t\\)\"") != std::string_view::npos) return false;
        std::string terminator = ")" + std::string(delim) + "\"";
        const auto end = line_.find(terminator, paren + 1);
        if (end == std::string_view::npos) {
            pos_ = line_.size();
            state_.in_raw_string = true;
            state_.raw_terminator = std::move(terminator);
        } else {
            pos_ = end + terminator.size();
        }
        emit(TokenKind::StringLiteral, trim(line_.substr(start, pos_ - start)));
        return true;
    }

    void scan_pp_number() {
        ++pos_;
        while (pos_ < line_.size()) {
            const auto d = static_cast<unsigned char>(line_[pos_]);
            const auto prev = static_cast<unsigned char>(line_[pos_ - 1]);
            if (is_ident_char(d) || d == '.') {
                ++pos_;
            } else if ((d == '+' || d == '-') &&
                       (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P')) {
                ++pos_;
            } else if (d == '\'' && pos_ + 1 < line_.size() &&
                       std::isalnum(static_cast<unsigned char>(line_[pos_ + 1]))) {
                pos_ += 2;
            } else {
                break;
            }
        }
    }

    std::string_view line_;
    std::uint32_t line_no_;
    ScanState& state_;
    const LanguageProfile& profile_;
    std::vector<Token>& out_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Keyword: return "Keyword";
        case TokenKind::Identifier: return "Identifier";
        case TokenKind::NumberLiteral: return "NumberLiteral";
        case TokenKind::StringLiteral: return "StringLiteral";
        case TokenKind::TimeLiteral: return "TimeLiteral";
        case TokenKind::Punct: return "Punct";
        case TokenKind::Pragma: return "Pragma";
        case TokenKind::PreprocessorText: return "PreprocessorText";
    }
    return "?";
}

std::string_view option_label(const NormalizationOptions& options) {
    if (options.normalize_identifiers && options.normalize_literals) return "identifier+literal";
    if (options.normalize_identifiers) return "identifier";
    if (options.normalize_literals) return "literal";
    return "none";
}

std::optional<NormalizationOptions> parse_option_label(std::string_view label) {
    const auto l = lower(label);
    if (l == "none" || l == "text" || l == "default") return NormalizationOptions{false, false};
    if (l == "identifier") return NormalizationOptions{true, false};
    if (l == "literal") return NormalizationOptions{false, true};
    if (l == "identifier+literal" || l == "identifier/literal") return NormalizationOptions{true, true};
    return std::nullopt;
}

std::vector<NormalizationOptions> all_options() {
    return {{false, false}, {true, false}, {false, true}, {true, true}};
}

std::uint64_t fingerprint_of(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

std::vector<std::vector<Token>> tokenize(std::string_view file_text,
                                         const LanguageProfile& profile) {
    std::vector<std::vector<Token>> lines;
    ScanState state;
    std::uint32_t line_no = 0;
    std::size_t start = 0;
    while (start <= file_text.size()) {
        auto end = file_text.find('\n', start);
        const bool last = end == std::string_view::npos;
        if (last) {
            end = file_text.size();
            // A trailing newline does not open another line.
            if (start == end && line_no > 0) break;
        }
        auto line = file_text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        auto& tokens = lines.emplace_back();
        LineScanner(line, line_no, state, profile, tokens).run();
        if (last) break;
        start = end + 1;
    }
    return lines;
}

std::string normalize_line(const std::vector<Token>& tokens,
                           const NormalizationOptions& options,
                           const LanguageProfile& profile) {
    const bool st = profile.language_id == LanguageId::ST;
    std::string out;
    for (const auto& token : tokens) {
        std::string piece;
        switch (token.kind) {
            case TokenKind::Keyword:
                piece = profile.case_insensitive ? upper(token.text) : token.text;
                break;
            case TokenKind::Identifier:
                if (options.normalize_identifiers) {
                    piece = kIdentifierPlaceholder;
                } else {
                    piece = st ? lower(token.text) : token.text;
                }
                break;
            case TokenKind::NumberLiteral:
            case TokenKind::TimeLiteral:
                if (options.normalize_literals) {
                    piece = kLiteralPlaceholder;
                } else {
                    piece = st ? upper(token.text) : token.text;
                }
                break;
            case TokenKind::StringLiteral:
                piece = options.normalize_literals ? std::string(kLiteralPlaceholder) : token.text;
                break;
            case TokenKind::Punct:
                piece = token.text;
                break;
            case TokenKind::Pragma:
            case TokenKind::PreprocessorText:
                piece = trim(token.text);
                break;
        }
        if (piece.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += piece;
    }
    return out;
}

std::vector<SignificantLine> significant_lines(std::string_view file_text,
                                               const LanguageProfile& profile,
                                               const NormalizationOptions& options,
                                               bool ignore_punct_lines) {
    return significant_lines(tokenize(file_text, profile), profile, options, ignore_punct_lines);
}

std::vector<SignificantLine> significant_lines(const std::vector<std::vector<Token>>& token_lines,
                                               const LanguageProfile& profile,
                                               const NormalizationOptions& options,
                                               bool ignore_punct_lines) {
    std::vector<SignificantLine> result;
    for (const auto& tokens : token_lines) {
        if (tokens.empty()) continue;
        const bool punct_only = std::all_of(tokens.begin(), tokens.end(), [](const Token& t) {
            return t.kind == TokenKind::Punct;
        });
        if (punct_only && ignore_punct_lines) continue;
        auto text = normalize_line(tokens, options, profile);
        if (text.empty()) continue;
        SignificantLine line;
        line.original_line = tokens.front().line;
        line.fingerprint = fingerprint_of(text);
        line.normalized_text = std::move(text);
        line.punct_only = punct_only;
        result.push_back(std::move(line));
    }
    return result;
}

}  // namespace stclone
