#include "liereduce/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace liereduce {

namespace {

struct Registry {
  std::shared_mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string, std::uint32_t> ids;
  std::uint64_t fresh_counter = 0;

  Registry() {
    // id 0 is reserved so a default-constructed Symbol is recognisable.
    names.emplace_back("<null>");
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  auto& r = registry();
  std::string key(name);
  {
    std::shared_lock lock(r.mutex);
    if (auto it = r.ids.find(key); it != r.ids.end()) return Symbol(it->second);
  }
  std::unique_lock lock(r.mutex);
  if (auto it = r.ids.find(key); it != r.ids.end()) return Symbol(it->second);
  auto id = static_cast<std::uint32_t>(r.names.size());
  r.names.push_back(key);
  r.ids.emplace(std::move(key), id);
  return Symbol(id);
}

std::optional<Symbol> Symbol::lookup(std::string_view name) {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  if (auto it = r.ids.find(std::string(name)); it != r.ids.end()) return Symbol(it->second);
  return std::nullopt;
}

Symbol Symbol::from_id(std::uint32_t id) {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  if (id == 0 || id >= r.names.size()) throw Error("unknown symbol id");
  return Symbol(id);
}

Symbol Symbol::fresh(std::string_view prefix) {
  auto& r = registry();
  std::unique_lock lock(r.mutex);
  for (;;) {
    std::string name = std::string(prefix) + "#" + std::to_string(r.fresh_counter++);
    if (r.ids.contains(name)) continue;
    auto id = static_cast<std::uint32_t>(r.names.size());
    r.names.push_back(name);
    r.ids.emplace(std::move(name), id);
    return Symbol(id);
  }
}

const std::string& Symbol::name() const {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  return r.names[id_];
}

bool SymbolNameLess::operator()(Symbol a, Symbol b) const {
  if (a == b) return false;
  return a.name() < b.name();
}

}  // namespace liereduce
