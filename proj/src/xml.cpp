// SPDX-License-Identifier: Apache-2.0

#include "cimc/xml.hpp"

#include <expat.h>

#include <memory>
#include <optional>

namespace cimc::xml {

const std::string* Element::attribute(std::string_view key) const noexcept {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

std::string Element::attribute_or(std::string_view key, std::string_view fallback) const {
  const auto* v = attribute(key);
  return v ? *v : std::string(fallback);
}

std::string_view Element::local_name() const noexcept {
  std::string_view n = name;
  auto colon = n.find(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

std::string_view Element::prefix() const noexcept {
  std::string_view n = name;
  auto colon = n.find(':');
  return colon == std::string_view::npos ? std::string_view{} : n.substr(0, colon);
}

namespace {

struct Builder {
  XML_Parser parser = nullptr;
  std::optional<Element> root;
  std::vector<Element*> stack;

  static void XMLCALL on_start(void* ud, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<Builder*>(ud);
    Element e;
    e.name = name;
    e.line = static_cast<long>(XML_GetCurrentLineNumber(self->parser));
    for (std::size_t i = 0; atts[i] != nullptr; i += 2) e.attributes.emplace_back(atts[i], atts[i + 1]);
    if (self->stack.empty()) {
      self->root = std::move(e);
      self->stack.push_back(&*self->root);
    } else {
      auto& kids = self->stack.back()->children;
      kids.push_back(std::move(e));
      self->stack.push_back(&kids.back());
    }
  }

  static void XMLCALL on_end(void* ud, const XML_Char*) { static_cast<Builder*>(ud)->stack.pop_back(); }

  static void XMLCALL on_text(void* ud, const XML_Char* s, int len) {
    auto* self = static_cast<Builder*>(ud);
    if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const noexcept { XML_ParserFree(p); }
};

void append_escaped(std::string& out, char c, bool attribute) {
  switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"':
      if (attribute) out += "&quot;";
      else out += c;
      break;
    case '\n':
      if (attribute) out += "&#xA;";
      else out += c;
      break;
    case '\r': out += "&#xD;"; break;
    case '\t':
      if (attribute) out += "&#x9;";
      else out += c;
      break;
    default: out += c;
  }
}

}  // namespace

Element parse(std::string_view document) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser{XML_ParserCreate("UTF-8")};
  if (!parser) throw ParseError("cannot allocate XML parser", 0);
  Builder b;
  b.parser = parser.get();
  XML_SetUserData(parser.get(), &b);
  XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &Builder::on_text);
  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    long line = static_cast<long>(XML_GetCurrentLineNumber(parser.get()));
    throw ParseError(std::string("line ") + std::to_string(line) + ": " +
                         XML_ErrorString(XML_GetErrorCode(parser.get())),
                     line);
  }
  if (!b.root) throw ParseError("document has no root element", 0);
  return std::move(*b.root);
}

std::string escape_attribute(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) append_escaped(out, c, true);
  return out;
}

std::string escape_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) append_escaped(out, c, false);
  return out;
}

}  // namespace cimc::xml
