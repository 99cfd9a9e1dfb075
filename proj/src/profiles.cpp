#include "stclone/lexnorm.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace stclone {

namespace {

std::string to_upper(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

LanguageProfile make_st_profile() {
    LanguageProfile p;
    p.language_id = LanguageId::ST;
    p.case_insensitive = true;
    p.keywords = {
        // Control flow
        "IF", "THEN", "ELSE", "ELSIF", "END_IF", "CASE", "OF", "END_CASE",
        "FOR", "TO", "BY", "DO", "END_FOR", "WHILE", "END_WHILE", "REPEAT",
        "UNTIL", "END_REPEAT", "EXIT", "RETURN", "CONTINUE", "JMP",
        // Variable sections
        "VAR", "VAR_INPUT", "VAR_OUTPUT", "VAR_IN_OUT", "VAR_GLOBAL",
        "VAR_EXTERNAL", "VAR_TEMP", "VAR_STAT", "VAR_INST", "VAR_CONFIG",
        "VAR_ACCESS", "END_VAR", "CONSTANT", "RETAIN", "NON_RETAIN",
        "PERSISTENT", "AT",
        // Program organization units
        "FUNCTION", "END_FUNCTION", "FUNCTION_BLOCK", "END_FUNCTION_BLOCK",
        "PROGRAM", "END_PROGRAM", "METHOD", "END_METHOD", "PROPERTY",
        "END_PROPERTY", "INTERFACE", "END_INTERFACE", "ACTION", "END_ACTION",
        "TYPE", "END_TYPE", "STRUCT", "END_STRUCT", "UNION", "END_UNION",
        "CONFIGURATION", "END_CONFIGURATION", "RESOURCE", "END_RESOURCE",
        "TASK", "WITH", "ON", "NAMESPACE", "END_NAMESPACE", "USING",
        "EXTENDS", "IMPLEMENTS", "ABSTRACT", "FINAL", "OVERRIDE", "PUBLIC",
        "PRIVATE", "PROTECTED", "INTERNAL", "THIS", "SUPER", "ARRAY",
        "POINTER", "REFERENCE", "REF_TO", "REF", "NULL",
        // Literals and operators
        "TRUE", "FALSE", "AND", "OR", "XOR", "NOT", "MOD", "AND_THEN",
        "OR_ELSE",
        // Elementary types
        "BOOL", "BYTE", "WORD", "DWORD", "LWORD", "SINT", "INT", "DINT",
        "LINT", "USINT", "UINT", "UDINT", "ULINT", "REAL", "LREAL", "TIME",
        "LTIME", "DATE", "LDATE", "TIME_OF_DAY", "TOD", "LTOD",
        "DATE_AND_TIME", "DT", "LDT", "STRING", "WSTRING", "CHAR", "WCHAR",
        "ANY", "ANY_NUM", "ANY_INT", "ANY_REAL", "ANY_BIT", "ANY_STRING",
        "ANY_DATE",
    };
    p.line_comment_openers = {"//"};
    p.block_comment_delimiters = {{"(*", "*)"}};
    p.nested_block_comments = true;
    p.pragma_delimiters = std::pair<std::string, std::string>{"{", "}"};
    return p;
}

LanguageProfile make_cpp_profile() {
    LanguageProfile p;
    p.language_id = LanguageId::CPP;
    p.case_insensitive = false;
    p.keywords = {
        "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand",
        "bitor", "bool", "break", "case", "catch", "char", "char16_t",
        "char32_t", "class", "compl", "const", "constexpr", "const_cast",
        "continue", "decltype", "default", "delete", "do", "double",
        "dynamic_cast", "else", "enum", "explicit", "export", "extern",
        "false", "float", "for", "friend", "goto", "if", "inline", "int",
        "long", "mutable", "namespace", "new", "noexcept", "not", "not_eq",
        "nullptr", "operator", "or", "or_eq", "private", "protected",
        "public", "register", "reinterpret_cast", "return", "short",
        "signed", "sizeof", "static", "static_assert", "static_cast",
        "struct", "switch", "template", "this", "thread_local", "throw",
        "true", "try", "typedef", "typeid", "typename", "union", "unsigned",
        "using", "virtual", "void", "volatile", "wchar_t", "while", "xor",
        "xor_eq",
        // Fixed-width and size types
        "int8_t", "int16_t", "int32_t", "int64_t", "uint8_t", "uint16_t",
        "uint32_t", "uint64_t", "size_t", "ptrdiff_t", "intptr_t",
        "uintptr_t",
    };
    p.line_comment_openers = {"//"};
    p.block_comment_delimiters = {{"/*", "*/"}};
    p.nested_block_comments = false;
    return p;
}

}  // namespace

bool LanguageProfile::is_keyword(std::string_view word) const {
    if (case_insensitive) return keywords.contains(to_upper(word));
    return keywords.contains(std::string(word));
}

void LanguageProfile::validate() const {
    std::vector<std::string_view> openers;
    for (const auto& o : line_comment_openers) {
        if (o.empty()) throw std::invalid_argument("empty line comment opener");
        openers.push_back(o);
    }
    for (const auto& [open, close] : block_comment_delimiters) {
        if (open.empty() || close.empty())
            throw std::invalid_argument("empty block comment delimiter");
        openers.push_back(open);
    }
    if (pragma_delimiters) {
        if (pragma_delimiters->first.empty() || pragma_delimiters->second.empty())
            throw std::invalid_argument("empty pragma delimiter");
    }
    std::sort(openers.begin(), openers.end());
    if (std::adjacent_find(openers.begin(), openers.end()) != openers.end())
        throw std::invalid_argument("duplicate comment opener");
}

const LanguageProfile& st_profile() {
    static const LanguageProfile profile = make_st_profile();
    return profile;
}

const LanguageProfile& cpp_profile() {
    static const LanguageProfile profile = make_cpp_profile();
    return profile;
}

const LanguageProfile& profile_for(LanguageId id) {
    return id == LanguageId::ST ? st_profile() : cpp_profile();
}

std::string_view language_name(LanguageId id) {
    return id == LanguageId::ST ? "st" : "cpp";
}

std::optional<LanguageId> parse_language(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "st") return LanguageId::ST;
    if (lower == "cpp" || lower == "c" || lower == "c++") return LanguageId::CPP;
    return std::nullopt;
}

}  // namespace stclone
