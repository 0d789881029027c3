#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pl0plus/xml.hpp"

namespace pl0plus {

/// A phase document that is well-formed XML but does not describe a valid
/// representation (unknown element, missing attribute, bad arity, ...).
class LoadError : public std::runtime_error {
public:
    explicit LoadError(const std::string& message) : std::runtime_error(message) {}
};

namespace detail {

const std::string& required_attribute(const xml::Node& node, std::string_view name);
std::int32_t integer_attribute(const xml::Node& node, std::string_view name);
std::optional<std::int32_t> optional_integer_attribute(const xml::Node& node, std::string_view name);
std::optional<std::int32_t> parse_int32(std::string_view text);

/// Source recovered from a `fuente` child, if present.
std::optional<std::string> source_from(const xml::Node& root);

}  // namespace detail
}  // namespace pl0plus
