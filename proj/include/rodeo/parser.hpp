//
// Copyright (c) 2026-present rodeo contributors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to
// deal in the Software without restriction, including without limitation the
// rights to use, copy, modify, merge, publish, distribute, sublicense, and/or
// sell copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
// FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
// DEALINGS IN THE SOFTWARE.
//
#ifndef RODEO_PARSER_HPP_INCLUDED
#define RODEO_PARSER_HPP_INCLUDED

#include <string>
#include <string_view>

#include "rodeo/syntax.hpp"

namespace rodeo {

//! Parses program text:
//!   rule    := head [ ":-" body ] "." | ":~" body "."
//!   head    := atom { "v" atom }
//!   body    := blit { "," blit }
//!   blit    := [ "not" ] atom | term cmp term
//!   cmp     := "=" | "!=" | "<" | ">" | "<=" | ">="
//!   atom    := ident [ "(" term { "," term } ")" ]
//!   term    := ident | VARIABLE | INTEGER
//! Identifiers start lower-case, variables upper-case; "%" starts a comment.
//! Errors carry "<name>:line:col".
Program parseProgram(std::string_view text, std::string_view name = "<input>");

//! Parses a single statement (convenience for CLI item lists and tests).
Rule parseRule(std::string_view text, std::string_view name = "<input>");

//! Round-trip serialization: parseProgram(serialize(p)) == p.
std::string serialize(const Program& p);

}  // namespace rodeo

#endif
