#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdk::util {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string sha256_hex(std::string_view data);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);

// 39609 -> "39,609"
std::string with_thousands(long long value);

std::string read_file(const std::string& path);            // throws IoFailure
void write_file(const std::string& path, std::string_view); // throws IoFailure

// One JSON value per line; blank lines are skipped.
std::vector<ojson> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<ojson>& rows);

struct UrlParts {
    std::string origin; // scheme://host[:port], consumable by httplib::Client
    std::string path;   // possibly empty prefix, no trailing slash
};
UrlParts parse_url(const std::string& url); // throws ConfigParse

} // namespace cdk::util
