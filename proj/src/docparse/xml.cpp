#include <cctype>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "figcap/docparse.hpp"

namespace figcap {

XmlParseError::XmlParseError(const std::string& what, std::size_t offset)
    : Error("XML parse error at byte " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

namespace {

struct XmlElement;

// Either a text run or a child element.
struct XmlContent {
  std::string text;
  std::unique_ptr<XmlElement> element;
};

struct XmlElement {
  std::string name;  // local name, namespace prefix removed
  std::vector<XmlContent> content;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class XmlReader {
 public:
  explicit XmlReader(std::string_view input) : in_(input) {}

  std::unique_ptr<XmlElement> parse() {
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    skip_misc();
    if (at_end() || in_[pos_] != '<') fail("expected root element");
    auto root = parse_element();
    skip_misc();
    if (!at_end()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw XmlParseError(what, pos_);
  }

  bool at_end() const { return pos_ >= in_.size(); }
  bool starts_with(std::string_view s) const {
    return in_.substr(pos_, s.size()) == s;
  }

  void skip_until(std::string_view terminator, const char* what) {
    std::size_t found = in_.find(terminator, pos_);
    if (found == std::string_view::npos) {
      pos_ = in_.size();
      fail(std::string("unterminated ") + what);
    }
    pos_ = found + terminator.size();
  }

  // Whitespace, comments, processing instructions and DOCTYPE outside the
  // root element.
  void skip_misc() {
    while (!at_end()) {
      if (is_space(in_[pos_])) {
        ++pos_;
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!DOCTYPE")) {
        int depth = 0;
        while (!at_end()) {
          char c = in_[pos_++];
          if (c == '[') ++depth;
          if (c == ']') --depth;
          if (c == '>' && depth <= 0) break;
        }
        if (at_end() && in_.back() != '>') fail("unterminated DOCTYPE");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    std::size_t start = pos_;
    while (!at_end() && is_name_char(in_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(in_.substr(start, pos_ - start));
  }

  static std::string local_name(const std::string& name) {
    auto colon = name.rfind(':');
    return colon == std::string::npos ? name : name.substr(colon + 1);
  }

  void skip_space() {
    while (!at_end() && is_space(in_[pos_])) ++pos_;
  }

  void decode_entity(std::string& out) {
    std::size_t start = pos_;
    std::size_t semi = in_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) {
      fail("malformed entity reference");
    }
    std::string_view entity = in_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (entity == "amp") out += '&';
    else if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "quot") out += '"';
    else if (entity == "apos") out += '\'';
    else if (!entity.empty() && entity[0] == '#') {
      unsigned long cp = 0;
      const bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
      std::string digits(entity.substr(hex ? 2 : 1));
      char* end = nullptr;
      cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
      if (digits.empty() || *end != '\0' || cp > 0x10FFFF) {
        pos_ = start;
        fail("bad character reference");
      }
      append_utf8(out, cp);
    } else {
      pos_ = start;
      fail("unknown entity '&" + std::string(entity) + ";'");
    }
  }

  void parse_attributes() {
    while (true) {
      skip_space();
      if (at_end()) fail("unexpected end of input in tag");
      if (in_[pos_] == '>' || in_[pos_] == '/') return;
      parse_name();
      skip_space();
      if (at_end() || in_[pos_] != '=') fail("expected '=' after attribute");
      ++pos_;
      skip_space();
      if (at_end() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
        fail("expected quoted attribute value");
      }
      char quote = in_[pos_++];
      std::size_t close = in_.find(quote, pos_);
      if (close == std::string_view::npos) {
        pos_ = in_.size();
        fail("unterminated attribute value");
      }
      pos_ = close + 1;
    }
  }

  std::unique_ptr<XmlElement> parse_element() {
    // pos_ at '<'
    ++pos_;
    auto element = std::make_unique<XmlElement>();
    std::string raw_name = parse_name();
    element->name = local_name(raw_name);
    parse_attributes();
    if (in_[pos_] == '/') {
      ++pos_;
      if (at_end() || in_[pos_] != '>') fail("expected '>'");
      ++pos_;
      return element;
    }
    ++pos_;  // '>'
    std::string text;
    auto flush_text = [&] {
      if (!text.empty()) {
        element->content.push_back({std::move(text), nullptr});
        text.clear();
      }
    };
    while (true) {
      if (at_end()) fail("unexpected end of input inside <" + raw_name + ">");
      char c = in_[pos_];
      if (c == '<') {
        if (starts_with("</")) {
          pos_ += 2;
          std::size_t name_pos = pos_;
          std::string closing = parse_name();
          if (closing != raw_name) {
            pos_ = name_pos;
            fail("mismatched closing tag </" + closing + ">, expected </" +
                 raw_name + ">");
          }
          skip_space();
          if (at_end() || in_[pos_] != '>') fail("expected '>'");
          ++pos_;
          flush_text();
          return element;
        }
        if (starts_with("<!--")) {
          skip_until("-->", "comment");
        } else if (starts_with("<![CDATA[")) {
          pos_ += 9;
          std::size_t end = in_.find("]]>", pos_);
          if (end == std::string_view::npos) {
            pos_ = in_.size();
            fail("unterminated CDATA section");
          }
          text.append(in_.substr(pos_, end - pos_));
          pos_ = end + 3;
        } else if (starts_with("<?")) {
          skip_until("?>", "processing instruction");
        } else {
          flush_text();
          element->content.push_back({{}, parse_element()});
        }
      } else if (c == '&') {
        decode_entity(text);
      } else {
        text += c;
        ++pos_;
      }
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

bool is_word_byte(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || (c & 0x80);
}

// Formulas become the token "MATH", separated from adjacent words but not
// from following punctuation.
void collect_text(const XmlElement& element, std::string& out,
                  bool& after_formula) {
  if (element.name == "formula") {
    if (!out.empty() && is_word_byte(out.back())) out += ' ';
    out += "MATH";
    after_formula = true;
    return;
  }
  for (const XmlContent& part : element.content) {
    if (part.element) {
      collect_text(*part.element, out, after_formula);
    } else if (!part.text.empty()) {
      if (after_formula && is_word_byte(part.text.front())) out += ' ';
      out += part.text;
      after_formula = false;
    }
  }
}

void collect_text(const XmlElement& element, std::string& out) {
  bool after_formula = false;
  collect_text(element, out, after_formula);
}

const XmlElement* find_first(const XmlElement& element,
                             std::string_view name) {
  if (element.name == name) return &element;
  for (const XmlContent& part : element.content) {
    if (!part.element) continue;
    if (const XmlElement* hit = find_first(*part.element, name)) return hit;
  }
  return nullptr;
}

void collect_paragraphs(const XmlElement& element,
                        std::vector<const XmlElement*>& out) {
  if (element.name == "p") {
    out.push_back(&element);
    return;
  }
  for (const XmlContent& part : element.content) {
    if (part.element) collect_paragraphs(*part.element, out);
  }
}

}  // namespace

ParsedDocument parse_document(std::string_view xml, std::string paper_id,
                              const SegmenterConfig& segmenter) {
  XmlReader reader(xml);
  std::unique_ptr<XmlElement> root = reader.parse();

  ParsedDocument result;
  Document& doc = result.document;
  doc.paper_id = std::move(paper_id);

  if (const XmlElement* header = find_first(*root, "teiHeader")) {
    if (const XmlElement* title = find_first(*header, "title")) {
      std::string text;
      collect_text(*title, text);
      doc.title = normalize_whitespace(text);
    }
  }
  if (const XmlElement* abstract = find_first(*root, "abstract")) {
    std::string text;
    collect_text(*abstract, text);
    doc.abstract = normalize_whitespace(text);
  }

  std::vector<const XmlElement*> paragraphs;
  const XmlElement* body = find_first(*root, "body");
  collect_paragraphs(body ? *body : *root, paragraphs);

  for (const XmlElement* p : paragraphs) {
    std::string raw;
    collect_text(*p, raw);
    std::string text = normalize_whitespace(raw);
    if (text.empty()) continue;
    Paragraph paragraph;
    paragraph.paragraph_id = "p" + std::to_string(doc.paragraphs.size() + 1);
    paragraph.sentences = segment_sentences(text, segmenter);
    paragraph.text = std::move(text);
    doc.paragraphs.push_back(std::move(paragraph));
  }
  if (doc.paragraphs.empty()) {
    result.warnings.push_back("document '" + doc.paper_id +
                              "' has no <p> elements");
  }
  return result;
}

}  // namespace figcap
