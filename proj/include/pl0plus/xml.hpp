// Minimal XML document model shared by every compiler phase.
//
// Only the subset the phases exchange is supported: elements, attributes,
// character data and CDATA sections. Comments and the XML declaration are
// accepted on input and discarded.
#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pl0plus::xml {

struct Attribute {
    std::string name;
    std::string value;

    bool operator==(const Attribute&) const = default;
};

/// One node of the tree. Text and CDATA nodes only use `value`; elements use
/// `name`, `attributes` and `children`.
struct Node {
    enum class Kind { element, text, cdata };

    Kind kind = Kind::element;
    std::string name;
    std::string value;
    std::vector<Attribute> attributes;
    std::vector<Node> children;

    static Node element(std::string name);
    static Node element(std::string name, std::initializer_list<Attribute> attributes);
    static Node text(std::string value);
    static Node cdata(std::string value);

    bool is_element() const { return kind == Kind::element; }
    bool is_element(std::string_view element_name) const {
        return kind == Kind::element && name == element_name;
    }

    /// Returns nullptr when the attribute is absent.
    const std::string* attribute(std::string_view attribute_name) const;
    bool has_attribute(std::string_view attribute_name) const {
        return attribute(attribute_name) != nullptr;
    }
    /// Replaces an existing attribute or appends a new one.
    Node& set_attribute(std::string attribute_name, std::string attribute_value);
    void remove_attribute(std::string_view attribute_name);

    Node& append(Node child);

    /// Element children only, in document order.
    std::vector<const Node*> elements() const;
    const Node* first_child(std::string_view element_name) const;

    /// Concatenation of the direct text and CDATA children.
    std::string inner_text() const;

    bool operator==(const Node&) const = default;
};

struct Document {
    Node root;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

Document parse_document(std::string_view text);

/// Declaration line followed by the root, two spaces of indentation per
/// nesting level. No trailing newline.
std::string serialize_document(const Document& doc);

/// Attribute order and surrounding whitespace of text nodes are ignored;
/// CDATA payloads are compared verbatim.
bool canonical_equal(const Node& a, const Node& b);
bool canonical_equal(const Document& a, const Document& b);

/// CDATA nodes carrying `payload`. A payload containing "]]>" is split into
/// adjacent sections so no single section contains the terminator.
std::vector<Node> cdata_sections(std::string_view payload);

/// Element `name` wrapping `payload` as CDATA.
Node cdata_element(std::string name, std::string_view payload);

/// Copy of `node` with every descendant element named in `names` removed.
Node without_elements(const Node& node, std::initializer_list<std::string_view> names);

bool is_valid_name(std::string_view name);

}  // namespace pl0plus::xml
