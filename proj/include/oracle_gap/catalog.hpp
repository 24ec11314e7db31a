// Copyright 2026 The Oracle Gap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORACLE_GAP_CATALOG_HPP_
#define ORACLE_GAP_CATALOG_HPP_

#include <array>
#include <initializer_list>
#include <string_view>

// The built-in operator table. Patterns are ECMAScript regular expressions
// applied to one source line. Replacement templates use the std::regex
// format syntax ($1, $&, $$) plus two integer extensions, ${+1} and ${-1},
// which rewrite capture group 1 as its value plus or minus one.
//
// Bump kCatalogVersion whenever an entry changes; mutant ids are only stable
// within one catalog version.

namespace oracle_gap::catalog {

inline constexpr std::string_view kCatalogVersion = "1";

struct Entry {
  std::string_view id;
  std::string_view category;
  std::string_view languages;  // space separated
  std::string_view pattern;
  std::initializer_list<std::string_view> replacements;
};

// clang-format off
inline const std::array kBuiltin = {
  // arithmetic
  Entry{"aor_add", "arithmetic", "generic", R"(([^+])\+(?![+=]))", {"$1-", "$1*"}},
  Entry{"aor_sub", "arithmetic", "generic", R"(([^-])-(?![-=>]))", {"$1+"}},
  Entry{"aor_mul", "arithmetic", "generic", R"(([^*/])\*(?![*=/]))", {"$1/", "$1+"}},
  Entry{"aor_div", "arithmetic", "generic", R"(([^/*])/(?![/=*]))", {"$1*"}},
  Entry{"aor_mod", "arithmetic", "generic", R"(([^%])%(?!=))", {"$1*", "$1/"}},
  Entry{"aor_add_assign", "arithmetic", "generic", R"(\+=)", {"-="}},
  Entry{"aor_sub_assign", "arithmetic", "generic", R"(-=)", {"+="}},
  Entry{"aor_inc", "arithmetic", "java c cpp go", R"(\+\+)", {"--"}},
  Entry{"aor_dec", "arithmetic", "java c cpp go", R"(--)", {"++"}},
  // relational
  Entry{"ror_lt", "relational", "generic", R"(([^<])<(?![<=]))", {"$1<=", "$1>"}},
  Entry{"ror_gt", "relational", "generic", R"(([^>=-])>(?![>=]))", {"$1>=", "$1<"}},
  Entry{"ror_le", "relational", "generic", R"(([^<])<=(?!>))", {"$1<", "$1>"}},
  Entry{"ror_ge", "relational", "generic", R"(([^>])>=)", {"$1>", "$1<"}},
  Entry{"ror_eq", "relational", "generic", R"(([^=!<>])==(?!=))", {"$1!="}},
  Entry{"ror_ne", "relational", "generic", R"(!=(?!=))", {"=="}},
  // logical
  Entry{"lor_and", "logical", "java c cpp go", R"(&&)", {"||"}},
  Entry{"lor_or", "logical", "java c cpp go", R"(\|\|)", {"&&"}},
  Entry{"lor_not_remove", "logical", "java c cpp go", R"(!([^=]))", {"$1"}},
  Entry{"lor_if_negate", "logical", "java c cpp", R"(\bif\s*\((.*)\))", {"if (!($1))"}},
  Entry{"lor_if_negate_go", "logical", "go", R"(\bif\s+(.*\S)\s*\{\s*$)", {"if !($1) {"}},
  Entry{"lor_and_py", "logical", "python", R"(\band\b)", {"or"}},
  Entry{"lor_or_py", "logical", "python", R"(\bor\b)", {"and"}},
  Entry{"lor_not_remove_py", "logical", "python", R"(\bnot\s+)", {""}},
  Entry{"lor_if_negate_py", "logical", "python", R"(\b((?:el)?if)\s+(.*\S)\s*:\s*$)", {"$1 not ($2):"}},
  // constant
  Entry{"crp_zero", "constant", "generic", R"(\b0\b)", {"1"}},
  Entry{"crp_one", "constant", "generic", R"(\b1\b)", {"0"}},
  Entry{"crp_int", "constant", "generic", R"(\b(\d+)\b)", {"${+1}", "${-1}"}},
  // statement deletion; the line is blanked, never removed
  Entry{"sdl", "statement_deletion", "java c cpp", R"(^(\s*)([A-Za-z_*(].*;)\s*$)", {"$1// deleted"}},
  Entry{"sdl_go", "statement_deletion", "go",
        R"(^(\s*)((?!(?:func|if|for|switch|case|default|else|package|import|type|var|const|return)\b)[A-Za-z_].*[^{}\s,(:])\s*$)",
        {"$1// deleted"}},
  Entry{"sdl_py", "statement_deletion", "python",
        R"(^(\s*)((?!(?:def|class|if|elif|else|for|while|try|except|finally|with|pass|import|from|global|nonlocal|async|lambda)\b)[A-Za-z_].*[^:\s,(\[{\\])\s*$)",
        {"$1pass  # deleted"}},
  // control flow
  Entry{"cfl_break", "control_flow", "generic", R"(\bbreak\b)", {"continue"}},
  Entry{"cfl_continue", "control_flow", "generic", R"(\bcontinue\b)", {"break"}},
  Entry{"cfl_if_const", "control_flow", "java cpp", R"(\bif\s*\((.*)\))", {"if (true)", "if (false)"}},
  Entry{"cfl_if_const_c", "control_flow", "c", R"(\bif\s*\((.*)\))", {"if (1)", "if (0)"}},
  Entry{"cfl_if_const_go", "control_flow", "go", R"(\bif\s+(.*\S)\s*\{\s*$)", {"if true {", "if false {"}},
  Entry{"cfl_if_const_py", "control_flow", "python", R"(\b((?:el)?if)\s+(.*\S)\s*:\s*$)", {"$1 True:", "$1 False:"}},
};
// clang-format on

}  // namespace oracle_gap::catalog

#endif  // ORACLE_GAP_CATALOG_HPP_
