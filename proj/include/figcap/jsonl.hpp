#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace figcap {

using Json = nlohmann::json;

// Calls `fn(record, line_number)` for every non-blank line of a JSON-lines
// file. Parse failures and exceptions thrown by `fn` are rethrown as
// figcap::Error prefixed with "file:line: ".
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t)>& fn);

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<Json>& records);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Typed field access that reports the missing/mistyped key by name.
std::string require_string(const Json& obj, const char* key);
long long require_int(const Json& obj, const char* key);
double require_number(const Json& obj, const char* key);

}  // namespace figcap
