#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "generator.hpp"
#include "stclone/lexnorm.hpp"

using namespace stclone;

namespace {

struct Tok {
    TokenKind kind;
    std::string text;
};

std::vector<Tok> lex_one(std::string_view line, const LanguageProfile& profile) {
    const auto lines = tokenize(line, profile);
    REQUIRE(lines.size() == 1);
    std::vector<Tok> out;
    for (const auto& t : lines[0]) out.push_back({t.kind, t.text});
    return out;
}

void check_tokens(const std::vector<Tok>& got, const std::vector<Tok>& want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CAPTURE(i);
        CHECK(token_kind_name(got[i].kind) == token_kind_name(want[i].kind));
        CHECK(got[i].text == want[i].text);
    }
}

std::string norm(std::string_view line, const LanguageProfile& profile, NormalizationOptions o) {
    const auto lines = tokenize(line, profile);
    std::string out;
    for (const auto& l : lines) {
        if (!out.empty()) out += "\n";
        out += normalize_line(l, o, profile);
    }
    return out;
}

constexpr NormalizationOptions kText{false, false};
constexpr NormalizationOptions kIdent{true, false};
constexpr NormalizationOptions kLit{false, true};
constexpr NormalizationOptions kBoth{true, true};

}  // namespace

TEST_CASE("st statement with trailing block comment") {
    check_tokens(lex_one("x := 1; (* set *)", st_profile()),
                 {{TokenKind::Identifier, "x"}, {TokenKind::Punct, ":="}, {TokenKind::NumberLiteral, "1"},
                  {TokenKind::Punct, ";"}});
}

TEST_CASE("st block comment spanning lines") {
    const auto lines = tokenize("(* a\nb *) IF c THEN", st_profile());
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].empty());
    REQUIRE(lines[1].size() == 3);
    CHECK(lines[1][0].kind == TokenKind::Keyword);
    CHECK(lines[1][0].text == "IF");
    CHECK(lines[1][1].kind == TokenKind::Identifier);
    CHECK(lines[1][1].text == "c");
    CHECK(lines[1][2].kind == TokenKind::Keyword);
    for (const auto& t : lines[1]) CHECK(t.line == 2);
}

TEST_CASE("cpp hex literal and line comment") {
    check_tokens(lex_one("int n = 0x1F; // hex", cpp_profile()),
                 {{TokenKind::Keyword, "int"}, {TokenKind::Identifier, "n"}, {TokenKind::Punct, "="},
                  {TokenKind::NumberLiteral, "0x1F"}, {TokenKind::Punct, ";"}});
}

TEST_CASE("st nested comments are depth counted") {
    const auto lines = tokenize("a (* x (* y *) still comment *) b\n(* (*\n*) c *) d", st_profile());
    REQUIRE(lines.size() == 3);
    REQUIRE(lines[0].size() == 2);
    CHECK(lines[0][1].text == "b");
    CHECK(lines[1].empty());
    REQUIRE(lines[2].size() == 1);
    CHECK(lines[2][0].text == "d");
}

TEST_CASE("unterminated block comment consumes to end of file") {
    const auto lines = tokenize("x := 1;\n(* open\ny := 2;\nz := 3;", st_profile());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].size() == 4);
    CHECK(lines[2].empty());
    CHECK(lines[3].empty());
    const auto cpp = tokenize("int a;\n/* open\nint b;", cpp_profile());
    CHECK(cpp[2].empty());
}

TEST_CASE("cpp block comments do not nest") {
    const auto lines = tokenize("/* a /* b */ c */", cpp_profile());
    REQUIRE(lines[0].size() == 3);
    CHECK(lines[0][0].text == "c");
    CHECK(lines[0][1].text == "*");
    CHECK(lines[0][2].text == "/");
}

TEST_CASE("st literal forms") {
    check_tokens(lex_one("a := 16#FF + 2#1010 + 1_000 + 1.5E-3 + INT#5;", st_profile()),
                 {{TokenKind::Identifier, "a"}, {TokenKind::Punct, ":="}, {TokenKind::NumberLiteral, "16#FF"},
                  {TokenKind::Punct, "+"}, {TokenKind::NumberLiteral, "2#1010"}, {TokenKind::Punct, "+"},
                  {TokenKind::NumberLiteral, "1_000"}, {TokenKind::Punct, "+"},
                  {TokenKind::NumberLiteral, "1.5E-3"}, {TokenKind::Punct, "+"},
                  {TokenKind::NumberLiteral, "INT#5"}, {TokenKind::Punct, ";"}});
    check_tokens(lex_one("t := T#1h2m3s; d := DT#2020-01-01-12:00:00; z := tod#12:00:00;", st_profile()),
                 {{TokenKind::Identifier, "t"}, {TokenKind::Punct, ":="}, {TokenKind::TimeLiteral, "T#1h2m3s"},
                  {TokenKind::Punct, ";"}, {TokenKind::Identifier, "d"}, {TokenKind::Punct, ":="},
                  {TokenKind::TimeLiteral, "DT#2020-01-01-12:00:00"}, {TokenKind::Punct, ";"},
                  {TokenKind::Identifier, "z"}, {TokenKind::Punct, ":="}, {TokenKind::TimeLiteral, "tod#12:00:00"},
                  {TokenKind::Punct, ";"}});
    check_tokens(lex_one("s := 'it$'s'; w := \"wide\"; q := STRING#'x';", st_profile()),
                 {{TokenKind::Identifier, "s"}, {TokenKind::Punct, ":="}, {TokenKind::StringLiteral, "'it$'s'"},
                  {TokenKind::Punct, ";"}, {TokenKind::Identifier, "w"}, {TokenKind::Punct, ":="},
                  {TokenKind::StringLiteral, "\"wide\""}, {TokenKind::Punct, ";"}, {TokenKind::Identifier, "q"},
                  {TokenKind::Punct, ":="}, {TokenKind::StringLiteral, "STRING#'x'"}, {TokenKind::Punct, ";"}});
}

TEST_CASE("st ranges, addresses and pragmas") {
    check_tokens(lex_one("arr : ARRAY[1..10] OF INT;", st_profile()),
                 {{TokenKind::Identifier, "arr"}, {TokenKind::Punct, ":"}, {TokenKind::Keyword, "ARRAY"},
                  {TokenKind::Punct, "["}, {TokenKind::NumberLiteral, "1"}, {TokenKind::Punct, ".."},
                  {TokenKind::NumberLiteral, "10"}, {TokenKind::Punct, "]"}, {TokenKind::Keyword, "OF"},
                  {TokenKind::Keyword, "INT"}, {TokenKind::Punct, ";"}});
    check_tokens(lex_one("in1 AT %IX1.0 : BOOL; {attribute 'hide'}", st_profile()),
                 {{TokenKind::Identifier, "in1"}, {TokenKind::Keyword, "AT"}, {TokenKind::Identifier, "%IX1.0"},
                  {TokenKind::Punct, ":"}, {TokenKind::Keyword, "BOOL"}, {TokenKind::Punct, ";"},
                  {TokenKind::Pragma, "{attribute 'hide'}"}});
}

TEST_CASE("typed literal does not collide with identifier hash") {
    const auto typed = norm("a := INT#5;", st_profile(), kBoth);
    const auto other = norm("a := x#5;", st_profile(), kBoth);
    CHECK(typed == "$ID := $LIT ;");
    CHECK(other == "$ID := $ID # $LIT ;");
}

TEST_CASE("cpp literal forms") {
    check_tokens(lex_one("auto s = u8\"x\" + R\"(a \"b\")\" + L'c' + 1'000'000ull + 1.5e-3f;", cpp_profile()),
                 {{TokenKind::Keyword, "auto"}, {TokenKind::Identifier, "s"}, {TokenKind::Punct, "="},
                  {TokenKind::StringLiteral, "u8\"x\""}, {TokenKind::Punct, "+"},
                  {TokenKind::StringLiteral, "R\"(a \"b\")\""}, {TokenKind::Punct, "+"},
                  {TokenKind::StringLiteral, "L'c'"}, {TokenKind::Punct, "+"},
                  {TokenKind::NumberLiteral, "1'000'000ull"}, {TokenKind::Punct, "+"},
                  {TokenKind::NumberLiteral, "1.5e-3f"}, {TokenKind::Punct, ";"}});
    check_tokens(lex_one("p->x <<= a::b;", cpp_profile()),
                 {{TokenKind::Identifier, "p"}, {TokenKind::Punct, "->"}, {TokenKind::Identifier, "x"},
                  {TokenKind::Punct, "<<="}, {TokenKind::Identifier, "a"}, {TokenKind::Punct, "::"},
                  {TokenKind::Identifier, "b"}, {TokenKind::Punct, ";"}});
}

TEST_CASE("cpp raw string spanning lines") {
    const auto lines = tokenize("auto s = R\"x(line one\n// not a comment\nend)x\"; int y;", cpp_profile());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].back().kind == TokenKind::StringLiteral);
    REQUIRE(lines[1].size() == 1);
    CHECK(lines[1][0].text == "// not a comment");
    CHECK(lines[2][0].kind == TokenKind::StringLiteral);
    CHECK(lines[2][0].text == "end)x\"");
    CHECK(lines[2][2].text == "int");
}

TEST_CASE("cpp preprocessor lines are one verbatim token") {
    const auto lines = tokenize("#define MAX(a, b) /* pick */ ((a) > (b) ? (a) : (b)) // max\n"
                                "  #include <vector>\n"
                                "#define LONG 1 + \\\n"
                                "    2\n"
                                "int x = a # b;",
                                cpp_profile());
    REQUIRE(lines.size() == 5);
    REQUIRE(lines[0].size() == 1);
    CHECK(lines[0][0].kind == TokenKind::PreprocessorText);
    CHECK(lines[0][0].text == "#define MAX(a, b)   ((a) > (b) ? (a) : (b))");
    CHECK(lines[1][0].text == "#include <vector>");
    CHECK(lines[2][0].text == "#define LONG 1 + \\");
    REQUIRE(lines[3].size() == 1);
    CHECK(lines[3][0].kind == TokenKind::PreprocessorText);
    CHECK(lines[3][0].text == "2");
    CHECK(lines[4].size() == 7);
    CHECK(norm("#include <vector>", cpp_profile(), kBoth) == "#include <vector>");
}

TEST_CASE("unrecognized characters become single punct tokens") {
    check_tokens(lex_one("a @ ` b", cpp_profile()),
                 {{TokenKind::Identifier, "a"}, {TokenKind::Punct, "@"}, {TokenKind::Punct, "`"},
                  {TokenKind::Identifier, "b"}});
}

TEST_CASE("line numbers follow physical lines, CR is dropped") {
    const auto lines = tokenize("a\r\n\r\n  b c\r\n", st_profile());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0][0].line == 1);
    CHECK(lines[1].empty());
    CHECK(lines[2][0].line == 3);
    CHECK(lines[2][1].line == 3);
    CHECK(lines[0][0].text == "a");
}

TEST_CASE("normalize_line examples") {
    const std::vector<Token> st1 = {{TokenKind::Identifier, "Counter", 1}, {TokenKind::Punct, ":=", 1},
                                    {TokenKind::Identifier, "counter", 1}, {TokenKind::Punct, "+", 1},
                                    {TokenKind::NumberLiteral, "1", 1},   {TokenKind::Punct, ";", 1}};
    CHECK(normalize_line(st1, kBoth, st_profile()) == "$ID := $ID + $LIT ;");
    const std::vector<Token> st2 = {{TokenKind::Keyword, "if", 1}, {TokenKind::Identifier, "Done", 1},
                                    {TokenKind::Keyword, "THEN", 1}};
    CHECK(normalize_line(st2, kText, st_profile()) == "IF done THEN");
    const std::vector<Token> cpp = {{TokenKind::Keyword, "int", 1}, {TokenKind::Identifier, "total", 1},
                                    {TokenKind::Punct, "=", 1},     {TokenKind::NumberLiteral, "0", 1},
                                    {TokenKind::Punct, ";", 1}};
    CHECK(normalize_line(cpp, kLit, cpp_profile()) == "int total = $LIT ;");
    CHECK(normalize_line(cpp, kIdent, cpp_profile()) == "int $ID = 0 ;");
}

TEST_CASE("each option replaces only its token kinds") {
    const std::string line = "IF Motor.Speed > T#5s THEN msg := 'hot'; END_IF";
    CHECK(norm(line, st_profile(), kText) == "IF motor . speed > T#5S THEN msg := 'hot' ; END_IF");
    CHECK(norm(line, st_profile(), kIdent) == "IF $ID . $ID > T#5S THEN $ID := 'hot' ; END_IF");
    CHECK(norm(line, st_profile(), kLit) == "IF motor . speed > $LIT THEN msg := $LIT ; END_IF");
    CHECK(norm(line, st_profile(), kBoth) == "IF $ID . $ID > $LIT THEN $ID := $LIT ; END_IF");
    CHECK(norm("if (Total > 3) return \"A\";", cpp_profile(), kText) == "if ( Total > 3 ) return \"A\" ;");
}

TEST_CASE("st case-insensitivity of keywords and identifiers") {
    for (const auto& o : all_options()) {
        CAPTURE(option_label(o));
        CHECK(norm("If A THEN", st_profile(), o) == norm("IF a then", st_profile(), o));
        CHECK(norm("t := t#5S; x := 16#ff;", st_profile(), o) == norm("T := T#5s; X := 16#FF;", st_profile(), o));
    }
    CHECK(norm("int Total;", cpp_profile(), kText) != norm("int total;", cpp_profile(), kText));
}

TEST_CASE("significant lines skip blank and comment-only lines") {
    const auto lines = significant_lines("x := 1;\n\n(* only a comment *)\n", st_profile(), kText);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].original_line == 1);
    CHECK(lines[0].normalized_text == "x := 1 ;");
    CHECK(lines[0].fingerprint == fingerprint_of("x := 1 ;"));
}

TEST_CASE("a lone brace is significant unless punct lines are ignored") {
    const std::string text = "void f() {\n  int a = 1;\n  if (a) {\n    a = 2;\n  }\n\n}\n";
    const auto lines = significant_lines(text, cpp_profile(), kText);
    REQUIRE(lines.size() == 6);
    CHECK(lines.back().original_line == 7);
    CHECK(lines.back().normalized_text == "}");
    CHECK(lines.back().punct_only);
    const auto trimmed = significant_lines(text, cpp_profile(), kText, true);
    CHECK(trimmed.size() == 4);
}

TEST_CASE("generated st file: significant count equals an independent line classifier") {
    // Build 500 lines whose class (code, comment, blank) is known by construction.
    std::mt19937_64 rng(500);
    std::vector<int> kinds(500, 0);
    for (std::size_t i = 0; i < 120; ++i) kinds[i] = i % 2 == 0 ? 1 : 2;
    std::shuffle(kinds.begin(), kinds.end(), rng);
    std::string text;
    std::size_t code = 0;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (kinds[i] == 0) {
            text += "  v" + std::to_string(i) + " := v" + std::to_string(i) + " + 1; (* inc *)\n";
            ++code;
        } else if (kinds[i] == 1) {
            text += (i % 4 == 1 ? "// note\n" : "(* note *)\n");
        } else {
            text += (i % 3 == 0 ? "\t \n" : "\n");
        }
    }
    REQUIRE(code == 380);
    CHECK(significant_lines(text, st_profile(), kText).size() == 380);
}

TEST_CASE("placeholders are re-lexed to their own kinds") {
    const auto toks = lex_one("$ID := $LIT + $ID;", st_profile());
    CHECK(toks[0].kind == TokenKind::Identifier);
    CHECK(toks[2].kind == TokenKind::NumberLiteral);
    CHECK(norm("$ID := $LIT + $ID;", st_profile(), kBoth) == "$ID := $LIT + $ID ;");
}

TEST_CASE("fuzzed lines: idempotence and monotone coarsening") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 2000; ++i) {
        for (const auto lang : {LanguageId::ST, LanguageId::CPP}) {
            const auto& profile = profile_for(lang);
            const auto line = testing::fuzz_line(rng, lang);
            CAPTURE(line.text);
            CAPTURE(line.mutated);
            for (const auto& o : all_options()) {
                const auto once = norm(line.text, profile, o);
                CHECK(norm(once, profile, o) == once);
                if (once != norm(line.mutated, profile, o)) continue;
                for (const auto& coarser : all_options()) {
                    if (o.subset_of(coarser))
                        CHECK(norm(line.text, profile, coarser) == norm(line.mutated, profile, coarser));
                }
            }
        }
    }
}

TEST_CASE("profiles validate") {
    CHECK_NOTHROW(st_profile().validate());
    CHECK_NOTHROW(cpp_profile().validate());
    auto bad = cpp_profile();
    bad.line_comment_openers.push_back("/*");
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    auto empty = st_profile();
    empty.block_comment_delimiters.push_back({"", "*)"});
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
    CHECK(st_profile().is_keyword("end_if"));
    CHECK(st_profile().is_keyword("End_If"));
    CHECK(cpp_profile().is_keyword("int"));
    CHECK_FALSE(cpp_profile().is_keyword("INT"));
    CHECK(cpp_profile().is_keyword("uint8_t"));
}

TEST_CASE("option labels round trip") {
    for (const auto& o : all_options()) CHECK(parse_option_label(option_label(o)) == o);
    CHECK(parse_option_label("Text") == kText);
    CHECK_FALSE(parse_option_label("fuzzy").has_value());
    CHECK(kIdent.subset_of(kBoth));
    CHECK_FALSE(kIdent.subset_of(kLit));
    CHECK(kText.subset_of(kLit));
}
