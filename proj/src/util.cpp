#include "cdk/util.hpp"
#include "cdk/errors.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <fstream>
#include <sstream>

namespace cdk::util {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

std::string with_thousands(long long value) {
    std::string digits = std::to_string(value < 0 ? -value : value);
    std::string out;
    int count = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (count && count % 3 == 0) out.push_back(',');
        out.push_back(*it);
        ++count;
    }
    if (value < 0) out.push_back('-');
    return std::string(out.rbegin(), out.rend());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoFailure, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(Errc::IoFailure, "short write to " + path);
}

std::vector<ojson> read_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoFailure, "cannot open " + path);
    std::vector<ojson> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        ojson row = ojson::parse(line, nullptr, false);
        if (row.is_discarded())
            fail(Errc::IoFailure, path + ":" + std::to_string(lineno) + ": invalid JSON");
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_jsonl(const std::string& path, const std::vector<ojson>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot write " + path);
    for (const auto& row : rows) out << row.dump() << '\n';
    if (!out) fail(Errc::IoFailure, "short write to " + path);
}

UrlParts parse_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        fail(Errc::ConfigParse, "URL without scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    UrlParts parts;
    if (path_start == std::string::npos) {
        parts.origin = url;
    } else {
        parts.origin = url.substr(0, path_start);
        parts.path = url.substr(path_start);
        while (!parts.path.empty() && parts.path.back() == '/') parts.path.pop_back();
    }
    return parts;
}

} // namespace cdk::util
