// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cimc::xml {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line) : std::runtime_error(what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Minimal DOM element. Qualified names are kept verbatim ("ecore:EPackage");
/// namespace prefixes are resolved by the callers that need them.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;  // document order
  std::vector<Element> children;
  std::string text;  // concatenated character data of this element only
  long line = 0;

  const std::string* attribute(std::string_view key) const noexcept;
  std::string attribute_or(std::string_view key, std::string_view fallback) const;

  /// Part after the prefix colon, or the whole name.
  std::string_view local_name() const noexcept;
  std::string_view prefix() const noexcept;
};

Element parse(std::string_view document);

std::string escape_attribute(std::string_view raw);
std::string escape_text(std::string_view raw);

}  // namespace cimc::xml
