#include "figcap/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "figcap/error.hpp"

namespace figcap {

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(Json::parse(line), line_number);
    } catch (const std::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line_number) + ": " +
                  e.what());
    }
  }
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<Json>& records) {
  std::string out;
  for (const Json& record : records) {
    out += record.dump();
    out += '\n';
  }
  write_file(path, out);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::string require_string(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string("missing field '") + key + "'");
  if (!it->is_string()) {
    throw Error(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

long long require_int(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) {
    throw Error(std::string("field '") + key + "' must be an integer");
  }
  return it->get<long long>();
}

double require_number(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string("missing field '") + key + "'");
  if (!it->is_number()) {
    throw Error(std::string("field '") + key + "' must be a number");
  }
  return it->get<double>();
}

}  // namespace figcap
