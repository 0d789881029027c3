#include "pl0plus/load_error.hpp"

#include <charconv>
#include <fmt/format.h>

namespace pl0plus::detail {

const std::string& required_attribute(const xml::Node& node, std::string_view name) {
    const std::string* value = node.attribute(name);
    if (value == nullptr) {
        throw LoadError(fmt::format("al elemento '{}' le falta el atributo '{}'", node.name, name));
    }
    return *value;
}

std::optional<std::int32_t> parse_int32(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    std::int32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::int32_t integer_attribute(const xml::Node& node, std::string_view name) {
    const std::string& text = required_attribute(node, name);
    auto value = parse_int32(text);
    if (!value) {
        throw LoadError(
            fmt::format("el atributo '{}' del elemento '{}' no es un entero: '{}'", name, node.name, text));
    }
    return *value;
}

std::optional<std::int32_t> optional_integer_attribute(const xml::Node& node, std::string_view name) {
    if (!node.has_attribute(name)) return std::nullopt;
    return integer_attribute(node, name);
}

std::optional<std::string> source_from(const xml::Node& root) {
    const xml::Node* fuente = root.first_child("fuente");
    if (fuente == nullptr) return std::nullopt;
    std::string out;
    for (const auto& c : fuente->children) {
        if (c.kind == xml::Node::Kind::cdata) out += c.value;
    }
    return out;
}

}  // namespace pl0plus::detail
