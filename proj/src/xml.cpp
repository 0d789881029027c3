#include "pl0plus/xml.hpp"

#include <algorithm>
#include <cstdint>
#include <fmt/format.h>

namespace pl0plus::xml {

Node Node::element(std::string name) {
    Node n;
    n.kind = Kind::element;
    n.name = std::move(name);
    return n;
}

Node Node::element(std::string name, std::initializer_list<Attribute> attributes) {
    Node n = element(std::move(name));
    n.attributes.assign(attributes.begin(), attributes.end());
    return n;
}

Node Node::text(std::string value) {
    Node n;
    n.kind = Kind::text;
    n.value = std::move(value);
    return n;
}

Node Node::cdata(std::string value) {
    Node n;
    n.kind = Kind::cdata;
    n.value = std::move(value);
    return n;
}

const std::string* Node::attribute(std::string_view attribute_name) const {
    for (const auto& attr : attributes) {
        if (attr.name == attribute_name) return &attr.value;
    }
    return nullptr;
}

Node& Node::set_attribute(std::string attribute_name, std::string attribute_value) {
    for (auto& attr : attributes) {
        if (attr.name == attribute_name) {
            attr.value = std::move(attribute_value);
            return *this;
        }
    }
    attributes.push_back({std::move(attribute_name), std::move(attribute_value)});
    return *this;
}

void Node::remove_attribute(std::string_view attribute_name) {
    std::erase_if(attributes, [&](const Attribute& a) { return a.name == attribute_name; });
}

Node& Node::append(Node child) {
    children.push_back(std::move(child));
    return children.back();
}

std::vector<const Node*> Node::elements() const {
    std::vector<const Node*> out;
    for (const auto& c : children) {
        if (c.is_element()) out.push_back(&c);
    }
    return out;
}

const Node* Node::first_child(std::string_view element_name) const {
    for (const auto& c : children) {
        if (c.is_element(element_name)) return &c;
    }
    return nullptr;
}

std::string Node::inner_text() const {
    std::string out;
    for (const auto& c : children) {
        if (!c.is_element()) out += c.value;
    }
    return out;
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(fmt::format("XML mal formado (línea {}, columna {}): {}", line, column, message)),
      line_(line),
      column_(column) {}

namespace {

bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
           static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), is_space);
}

void append_utf8(std::string& out, std::uint32_t cp) {
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

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Document run() {
        skip_prolog();
        if (at_end() || peek() != '<') fail("se esperaba el elemento raíz");
        Document doc{parse_element()};
        skip_misc();
        if (!at_end()) fail("contenido después del elemento raíz");
        return doc;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 0;

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                column_ = 0;
            } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
                ++column_;
            }
        }
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column_); }

    void expect(std::string_view s) {
        if (!starts_with(s)) fail(fmt::format("se esperaba '{}'", s));
        advance(s.size());
    }

    void skip_space() {
        while (!at_end() && is_space(peek())) advance();
    }

    void skip_until(std::string_view terminator) {
        std::size_t found = text_.find(terminator, pos_);
        if (found == std::string_view::npos) fail(fmt::format("falta '{}'", terminator));
        advance(found + terminator.size() - pos_);
    }

    void skip_misc() {
        for (;;) {
            skip_space();
            if (starts_with("<!--")) {
                skip_until("-->");
            } else {
                return;
            }
        }
    }

    void skip_prolog() {
        if (text_.substr(0, 3) == "\xEF\xBB\xBF") advance(3);
        skip_space();
        if (starts_with("<?xml")) skip_until("?>");
        skip_misc();
        if (starts_with("<!DOCTYPE")) fail("DTD no soportada");
        if (starts_with("<?")) fail("instrucción de procesamiento no soportada");
    }

    std::string parse_name() {
        if (at_end() || !is_name_start(peek())) fail("se esperaba un nombre");
        std::size_t start = pos_;
        while (!at_end() && is_name_char(peek())) advance();
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string decode_entity() {
        // positioned at '&'
        std::size_t semi = text_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 12) fail("referencia de entidad mal formada");
        std::string_view ref = text_.substr(pos_ + 1, semi - pos_ - 1);
        std::string out;
        if (ref == "lt") out = "<";
        else if (ref == "gt") out = ">";
        else if (ref == "amp") out = "&";
        else if (ref == "quot") out = "\"";
        else if (ref == "apos") out = "'";
        else if (ref.starts_with('#')) {
            std::uint32_t cp = 0;
            bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
            std::string_view digits = ref.substr(hex ? 2 : 1);
            if (digits.empty()) fail("referencia de carácter vacía");
            for (char c : digits) {
                int d;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
                else fail("referencia de carácter inválida");
                cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
                if (cp > 0x10FFFF) fail("referencia de carácter fuera de rango");
            }
            append_utf8(out, cp);
        } else {
            fail(fmt::format("entidad desconocida '&{};'", ref));
        }
        advance(semi + 1 - pos_);
        return out;
    }

    std::string parse_attribute_value() {
        char quote = peek();
        if (quote != '"' && quote != '\'') fail("se esperaba un valor de atributo entre comillas");
        advance();
        std::string value;
        while (!at_end() && peek() != quote) {
            if (peek() == '<') fail("'<' no permitido en un valor de atributo");
            if (peek() == '&') {
                value += decode_entity();
            } else {
                value += peek();
                advance();
            }
        }
        if (at_end()) fail("valor de atributo sin cerrar");
        advance();
        return value;
    }

    Node parse_element() {
        expect("<");
        Node node = Node::element(parse_name());
        for (;;) {
            bool had_space = !at_end() && is_space(peek());
            skip_space();
            if (starts_with("/>")) {
                advance(2);
                return node;
            }
            if (peek() == '>') {
                advance();
                break;
            }
            if (!had_space) fail("se esperaba un espacio antes del atributo");
            int attr_line = line_;
            int attr_column = column_;
            std::string attr_name = parse_name();
            skip_space();
            expect("=");
            skip_space();
            std::string attr_value = parse_attribute_value();
            if (node.has_attribute(attr_name)) {
                throw ParseError(fmt::format("atributo duplicado '{}'", attr_name), attr_line, attr_column);
            }
            node.attributes.push_back({std::move(attr_name), std::move(attr_value)});
        }
        parse_content(node);
        return node;
    }

    void flush_text(Node& node, std::string& pending) {
        if (!pending.empty() && !is_blank(pending)) node.children.push_back(Node::text(pending));
        pending.clear();
    }

    void parse_content(Node& node) {
        std::string pending;
        for (;;) {
            if (at_end()) fail(fmt::format("elemento '{}' sin cerrar", node.name));
            if (starts_with("</")) {
                flush_text(node, pending);
                advance(2);
                std::string closing = parse_name();
                if (closing != node.name) {
                    fail(fmt::format("se esperaba '</{}>' y se encontró '</{}>'", node.name, closing));
                }
                skip_space();
                expect(">");
                return;
            }
            if (starts_with("<![CDATA[")) {
                flush_text(node, pending);
                advance(9);
                std::size_t end = text_.find("]]>", pos_);
                if (end == std::string_view::npos) fail("sección CDATA sin cerrar");
                node.children.push_back(Node::cdata(std::string(text_.substr(pos_, end - pos_))));
                advance(end + 3 - pos_);
            } else if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<?") || starts_with("<!")) {
                fail("construcción XML no soportada");
            } else if (peek() == '<') {
                flush_text(node, pending);
                node.children.push_back(parse_element());
            } else if (peek() == '&') {
                pending += decode_entity();
            } else {
                if (starts_with("]]>")) fail("']]>' no permitido en texto");
                pending += peek();
                advance();
            }
        }
    }
};

void escape_into(std::string& out, std::string_view s, bool attribute) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (attribute) out += "&quot;";
                else out += c;
                break;
            case '\n':
                if (attribute) out += "&#10;";
                else out += c;
                break;
            case '\t':
                if (attribute) out += "&#9;";
                else out += c;
                break;
            case '\r': out += "&#13;"; break;
            default: out += c;
        }
    }
}

void write_inline(std::string& out, const Node& node) {
    if (node.kind == Node::Kind::cdata) {
        out += "<![CDATA[";
        out += node.value;
        out += "]]>";
    } else {
        escape_into(out, node.value, false);
    }
}

void write_node(std::string& out, const Node& node, int depth) {
    std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    if (!node.is_element()) {
        out += indent;
        write_inline(out, node);
        out += '\n';
        return;
    }
    out += indent;
    out += '<';
    out += node.name;
    for (const auto& attr : node.attributes) {
        out += ' ';
        out += attr.name;
        out += "=\"";
        escape_into(out, attr.value, true);
        out += '"';
    }
    if (node.children.empty()) {
        out += "/>\n";
        return;
    }
    bool character_only = std::none_of(node.children.begin(), node.children.end(),
                                       [](const Node& c) { return c.is_element(); });
    out += '>';
    if (character_only) {
        for (const auto& c : node.children) write_inline(out, c);
    } else {
        out += '\n';
        for (const auto& c : node.children) write_node(out, c, depth + 1);
        out += indent;
    }
    out += "</";
    out += node.name;
    out += ">\n";
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

Document parse_document(std::string_view text) { return Parser(text).run(); }

std::string serialize_document(const Document& doc) {
    std::string out = "<?xml version=\"1.0\" ?>\n";
    write_node(out, doc.root, 0);
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

bool canonical_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::text: return trim(a.value) == trim(b.value);
        case Node::Kind::cdata: return a.value == b.value;
        case Node::Kind::element: break;
    }
    if (a.name != b.name || a.attributes.size() != b.attributes.size()) return false;
    for (const auto& attr : a.attributes) {
        const std::string* other = b.attribute(attr.name);
        if (other == nullptr || *other != attr.value) return false;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!canonical_equal(a.children[i], b.children[i])) return false;
    }
    return true;
}

bool canonical_equal(const Document& a, const Document& b) { return canonical_equal(a.root, b.root); }

std::vector<Node> cdata_sections(std::string_view payload) {
    std::vector<Node> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t found = payload.find("]]>", start);
        if (found == std::string_view::npos) break;
        // "]]" closes this section, ">" opens the next
        out.push_back(Node::cdata(std::string(payload.substr(start, found + 2 - start))));
        start = found + 2;
    }
    out.push_back(Node::cdata(std::string(payload.substr(start))));
    return out;
}

Node cdata_element(std::string name, std::string_view payload) {
    Node n = Node::element(std::move(name));
    for (auto& section : cdata_sections(payload)) n.children.push_back(std::move(section));
    return n;
}

Node without_elements(const Node& node, std::initializer_list<std::string_view> names) {
    Node copy = node;
    copy.children.clear();
    for (const auto& c : node.children) {
        if (c.is_element() && std::find(names.begin(), names.end(), c.name) != names.end()) continue;
        copy.children.push_back(c.is_element() ? without_elements(c, names) : c);
    }
    return copy;
}

bool is_valid_name(std::string_view name) {
    if (name.empty() || !is_name_start(name.front())) return false;
    return std::all_of(name.begin(), name.end(), is_name_char);
}

}  // namespace pl0plus::xml
