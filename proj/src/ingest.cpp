#include "asmote/ingest.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace asmote {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string unescape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t semi = s.find(';', i);
    if (semi == std::string::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string entity = s.substr(i + 1, semi - i - 1);
    if (entity == "amp") out.push_back('&');
    else if (entity == "lt") out.push_back('<');
    else if (entity == "gt") out.push_back('>');
    else if (entity == "quot") out.push_back('"');
    else if (entity == "apos") out.push_back('\'');
    else if (!entity.empty() && entity[0] == '#') {
      int code = std::stoi(entity.substr(entity[1] == 'x' ? 2 : 1), nullptr,
                           entity[1] == 'x' ? 16 : 10);
      if (code < 0x80) {
        out.push_back(static_cast<char>(code));
      } else {  // encode as UTF-8
        if (code < 0x800) {
          out.push_back(static_cast<char>(0xC0 | (code >> 6)));
        } else {
          out.push_back(static_cast<char>(0xE0 | (code >> 12)));
          out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        }
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
      }
    } else {
      out.append(s, i, semi - i + 1);
    }
    i = semi + 1;
  }
  return out;
}

// Minimal scanner for the SemEval ABSA XML subset: start/end/empty tags
// with attributes, plus text content. No namespaces, CDATA, or comments in
// these files beyond the XML declaration.
struct XmlTag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;
  bool self_closing = false;
};

class XmlScanner {
 public:
  explicit XmlScanner(std::string content) : content_(std::move(content)) {}

  // Advances to the next tag; text between tags accumulates into *text.
  bool next(XmlTag* tag, std::string* text) {
    text->clear();
    while (pos_ < content_.size()) {
      std::size_t lt = content_.find('<', pos_);
      if (lt == std::string::npos) {
        pos_ = content_.size();
        return false;
      }
      text->append(content_, pos_, lt - pos_);
      std::size_t gt = content_.find('>', lt);
      if (gt == std::string::npos) throw DataError("unterminated xml tag");
      std::string body = content_.substr(lt + 1, gt - lt - 1);
      pos_ = gt + 1;
      if (body.empty()) throw DataError("empty xml tag");
      if (body[0] == '?' || body[0] == '!') continue;  // declaration/comment
      *tag = parse_tag(body);
      return true;
    }
    return false;
  }

 private:
  static XmlTag parse_tag(const std::string& body) {
    XmlTag tag;
    std::size_t i = 0;
    if (body[0] == '/') {
      tag.closing = true;
      i = 1;
    }
    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i])) &&
           body[i] != '/')
      tag.name.push_back(body[i++]);
    while (i < body.size()) {
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i])))
        ++i;
      if (i >= body.size()) break;
      if (body[i] == '/') {
        tag.self_closing = true;
        ++i;
        continue;
      }
      std::string key;
      while (i < body.size() && body[i] != '=' &&
             !std::isspace(static_cast<unsigned char>(body[i])))
        key.push_back(body[i++]);
      while (i < body.size() && (body[i] == '=' ||
                                 std::isspace(static_cast<unsigned char>(body[i]))))
        ++i;
      if (i >= body.size() || (body[i] != '"' && body[i] != '\''))
        throw DataError("malformed xml attribute near: " + body);
      const char quote = body[i++];
      std::string value;
      while (i < body.size() && body[i] != quote) value.push_back(body[i++]);
      if (i >= body.size()) throw DataError("unterminated xml attribute");
      ++i;
      tag.attrs[key] = unescape_xml(value);
    }
    return tag;
  }

  std::string content_;
  std::size_t pos_ = 0;
};

int attr_int(const XmlTag& tag, const std::string& key) {
  auto it = tag.attrs.find(key);
  if (it == tag.attrs.end())
    throw DataError("xml tag <" + tag.name + "> missing attribute " + key);
  return std::stoi(it->second);
}

std::string attr_str(const XmlTag& tag, const std::string& key) {
  auto it = tag.attrs.find(key);
  if (it == tag.attrs.end())
    throw DataError("xml tag <" + tag.name + "> missing attribute " + key);
  return it->second;
}

std::vector<std::string> split_whitespace(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::vector<SemevalSentence> parse_semeval_xml(const std::string& path) {
  XmlScanner scanner(read_file(path));
  std::vector<SemevalSentence> sentences;
  SemevalSentence current;
  bool in_sentence = false;
  bool in_text = false;
  XmlTag tag;
  std::string text;
  while (scanner.next(&tag, &text)) {
    if (in_text) current.text += unescape_xml(text);
    if (tag.name == "sentence" && !tag.closing) {
      current = SemevalSentence{};
      current.id = attr_str(tag, "id");
      in_sentence = true;
    } else if (tag.name == "sentence" && tag.closing) {
      if (in_sentence) sentences.push_back(current);
      in_sentence = false;
    } else if (tag.name == "text") {
      in_text = !tag.closing && !tag.self_closing;
    } else if (tag.name == "aspectTerm" || tag.name == "Opinion") {
      if (!in_sentence) continue;
      SemevalAspect a;
      a.term = tag.name == "aspectTerm" ? attr_str(tag, "term")
                                        : attr_str(tag, "target");
      if (a.term == "NULL") continue;  // 2015/16 implicit targets
      a.polarity = attr_str(tag, "polarity");
      a.from = attr_int(tag, "from");
      a.to = attr_int(tag, "to");
      current.aspects.push_back(std::move(a));
    }
  }
  return sentences;
}

namespace {

Tag tag_from_suffix(const std::string& suffix, const std::string& where) {
  if (suffix == "B") return Tag::B;
  if (suffix == "I") return Tag::I;
  if (suffix == "O") return Tag::O;
  throw DataError("bad tag suffix '" + suffix + "' in " + where);
}

// "word\B word\I word\O ..." -> tokens + spans.
std::pair<std::vector<std::string>, std::vector<Span>> parse_tagged(
    const std::string& field, const std::string& where) {
  std::vector<std::string> tokens;
  std::vector<Tag> tags;
  for (const std::string& piece : split_whitespace(field)) {
    std::size_t slash = piece.rfind('\\');
    if (slash == std::string::npos || slash + 1 >= piece.size())
      throw DataError("token without tag suffix in " + where + ": " + piece);
    tokens.push_back(piece.substr(0, slash));
    tags.push_back(tag_from_suffix(piece.substr(slash + 1), where));
  }
  std::vector<Span> spans;
  int start = -1;
  for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
    if (tags[static_cast<std::size_t>(i)] == Tag::B) {
      if (start >= 0) spans.emplace_back(start, i);
      start = i;
    } else if (tags[static_cast<std::size_t>(i)] == Tag::I) {
      if (start < 0)
        throw DataError("tag sequence starts a span with I in " + where);
    } else {
      if (start >= 0) spans.emplace_back(start, i);
      start = -1;
    }
  }
  if (start >= 0) spans.emplace_back(start, static_cast<int>(tags.size()));
  return {std::move(tokens), std::move(spans)};
}

}  // namespace

std::vector<ToweRecord> parse_towe_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open TOWE file: " + path);
  std::vector<ToweRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("s_id", 0) == 0) continue;  // header
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos
                                              ? std::string::npos
                                              : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() < 4)
      throw DataError("TOWE line has fewer than 4 tab-separated fields at " +
                      where);
    ToweRecord rec;
    rec.sentence_id = fields[0];
    rec.tokens = split_whitespace(fields[1]);
    auto [target_tokens, target_spans] = parse_tagged(fields[2], where);
    auto [opinion_tokens, opinion_spans] = parse_tagged(fields[3], where);
    if (target_tokens != rec.tokens || opinion_tokens != rec.tokens)
      throw DataError("tagged token columns disagree with the sentence at " +
                      where);
    if (target_spans.size() != 1)
      throw DataError("expected exactly one target span at " + where +
                      ", found " + std::to_string(target_spans.size()));
    rec.target = target_spans[0];
    rec.opinions = normalize_span_set(opinion_spans);
    if (rec.opinions.empty())
      throw DataError("TOWE record with no opinion span at " + where);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace asmote
