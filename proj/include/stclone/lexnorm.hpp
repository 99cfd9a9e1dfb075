#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace stclone {

enum class LanguageId { ST, CPP };

std::string_view language_name(LanguageId id);               // "st" / "cpp"
std::optional<LanguageId> parse_language(std::string_view name);

/**
 * Lexical rules of one language.
 *
 * Keywords are stored upper-case for case-insensitive languages (ST) and
 * verbatim otherwise. Literal syntax is not data-driven; the scanner picks
 * the literal rules by language_id.
 */
struct LanguageProfile {
    LanguageId language_id = LanguageId::CPP;
    std::unordered_set<std::string> keywords;
    bool case_insensitive = false;
    std::vector<std::string> line_comment_openers;
    std::vector<std::pair<std::string, std::string>> block_comment_delimiters;
    bool nested_block_comments = false;
    std::optional<std::pair<std::string, std::string>> pragma_delimiters;

    bool is_keyword(std::string_view word) const;

    // Throws std::invalid_argument when a delimiter is empty or two openers coincide.
    void validate() const;
};

const LanguageProfile& st_profile();
const LanguageProfile& cpp_profile();
const LanguageProfile& profile_for(LanguageId id);

enum class TokenKind {
    Keyword,
    Identifier,
    NumberLiteral,
    StringLiteral,
    TimeLiteral,
    Punct,
    Pragma,
    PreprocessorText,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Punct;
    std::string text;
    std::uint32_t line = 1;  // 1-based physical line

    bool operator==(const Token&) const = default;
};

/// The four detector options: Text, Identifier, Literal, Identifier + Literal.
struct NormalizationOptions {
    bool normalize_identifiers = false;
    bool normalize_literals = false;

    bool operator==(const NormalizationOptions&) const = default;

    /// True when every normalization enabled here is also enabled in `other`.
    bool subset_of(const NormalizationOptions& other) const {
        return (!normalize_identifiers || other.normalize_identifiers) &&
               (!normalize_literals || other.normalize_literals);
    }
};

/// "none", "identifier", "literal", "identifier+literal".
std::string_view option_label(const NormalizationOptions& options);
std::optional<NormalizationOptions> parse_option_label(std::string_view label);
/// All four option combinations, from Text to Identifier + Literal.
std::vector<NormalizationOptions> all_options();

inline constexpr std::string_view kIdentifierPlaceholder = "$ID";
inline constexpr std::string_view kLiteralPlaceholder = "$LIT";

struct SignificantLine {
    std::uint32_t original_line = 1;
    std::string normalized_text;
    std::uint64_t fingerprint = 0;
    bool punct_only = false;  // every token on the line is Punct
};

/// Stable 64-bit digest (FNV-1a with a murmur3 finalizer).
std::uint64_t fingerprint_of(std::string_view text);

/**
 * Splits `file_text` on LF (a trailing CR is dropped) and tokenizes each
 * physical line. Block comments, C++ raw strings and preprocessor line
 * continuations carry state across lines. The result has one entry per
 * physical line; comment-only and blank lines yield empty lists.
 */
std::vector<std::vector<Token>> tokenize(std::string_view file_text,
                                         const LanguageProfile& profile);

/// Canonical text of a single line's tokens, joined by single spaces.
std::string normalize_line(const std::vector<Token>& tokens,
                           const NormalizationOptions& options,
                           const LanguageProfile& profile);

std::vector<SignificantLine> significant_lines(std::string_view file_text,
                                               const LanguageProfile& profile,
                                               const NormalizationOptions& options,
                                               bool ignore_punct_lines = false);

/// Same as significant_lines, over the output of an earlier tokenize call.
std::vector<SignificantLine> significant_lines(const std::vector<std::vector<Token>>& token_lines,
                                               const LanguageProfile& profile,
                                               const NormalizationOptions& options,
                                               bool ignore_punct_lines = false);

}  // namespace stclone
