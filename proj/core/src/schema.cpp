#include "eierl/schema.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eierl {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> auto_vocab(const std::string& slot, int n = 20) {
  std::vector<std::string> v;
  v.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v.push_back(slot + "_" + std::to_string(i));
  return v;
}

std::pair<int, int> parse_range(const std::string& value, const char* key) {
  const auto dots = value.find("..");
  if (dots == std::string::npos)
    throw std::invalid_argument(std::string("schema: ") + key +
                                " expects '<min>..<max>', got '" + value + "'");
  return {std::stoi(trim(value.substr(0, dots))),
          std::stoi(trim(value.substr(dots + 2)))};
}

}  // namespace

int DomainSchema::informable_index(const std::string& slot) const {
  for (std::size_t i = 0; i < informable.size(); ++i) {
    if (informable[i].name == slot) return static_cast<int>(i);
  }
  return -1;
}

int DomainSchema::requestable_index(const std::string& slot) const {
  for (std::size_t i = 0; i < requestable.size(); ++i) {
    if (requestable[i].name == slot) return static_cast<int>(i);
  }
  return -1;
}

void validate_schema(const DomainSchema& s) {
  if (s.name.empty()) throw std::invalid_argument("schema: missing name");
  if (s.informable.empty())
    throw std::invalid_argument("schema: needs at least one informable slot");
  if (s.requestable.empty())
    throw std::invalid_argument("schema: needs at least one requestable slot");
  for (const SlotDef& slot : s.informable) {
    if (slot.vocab.empty())
      throw std::invalid_argument("schema: empty vocabulary for informable slot '" +
                                  slot.name + "'");
  }
  for (const SlotDef& slot : s.requestable) {
    if (slot.vocab.empty())
      throw std::invalid_argument("schema: empty vocabulary for requestable slot '" +
                                  slot.name + "'");
    if (s.informable_index(slot.name) >= 0)
      throw std::invalid_argument("schema: slot '" + slot.name +
                                  "' is both informable and requestable");
  }
  if (s.kb_size < 1) throw std::invalid_argument("schema: kb_size must be >= 1");
  if (s.max_turns < 1)
    throw std::invalid_argument("schema: max_turns must be >= 1");
  const int ni = static_cast<int>(s.informable.size());
  const int nr = static_cast<int>(s.requestable.size());
  if (s.goal_constraints_min < 1 || s.goal_constraints_max < s.goal_constraints_min ||
      s.goal_constraints_max > ni)
    throw std::invalid_argument("schema: bad goal_constraints range");
  if (s.goal_requests_min < 1 || s.goal_requests_max < s.goal_requests_min ||
      s.goal_requests_max > nr)
    throw std::invalid_argument("schema: bad goal_requests range");
}

DomainSchema parse_schema(const std::string& text) {
  DomainSchema schema;
  schema.informable.clear();
  schema.requestable.clear();
  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto fail = [&](const std::string& why) {
      throw std::invalid_argument("schema line " + std::to_string(lineno) +
                                  ": " + why);
    };

    if (line.rfind("informable ", 0) == 0 || line.rfind("requestable ", 0) == 0) {
      const bool inf = line[0] == 'i';
      std::string rest = trim(line.substr(inf ? 11 : 12));
      std::string slot = rest;
      std::vector<std::string> vocab;
      const auto eq = rest.find('=');
      if (eq != std::string::npos) {
        slot = trim(rest.substr(0, eq));
        vocab = split_list(rest.substr(eq + 1));
      }
      if (slot.empty()) fail("missing slot name");
      if (inf) {
        if (vocab.empty()) fail("informable slot needs a vocabulary");
        schema.informable.push_back({slot, std::move(vocab)});
      } else {
        if (vocab.empty()) vocab = auto_vocab(slot);
        schema.requestable.push_back({slot, std::move(vocab)});
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") {
      schema.name = value;
    } else if (key == "kb_size") {
      schema.kb_size = std::stoi(value);
    } else if (key == "max_turns") {
      schema.max_turns = std::stoi(value);
    } else if (key == "goal_constraints") {
      std::tie(schema.goal_constraints_min, schema.goal_constraints_max) =
          parse_range(value, "goal_constraints");
    } else if (key == "goal_requests") {
      std::tie(schema.goal_requests_min, schema.goal_requests_max) =
          parse_range(value, "goal_requests");
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  validate_schema(schema);
  return schema;
}

DomainSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str());
}

std::string format_schema(const DomainSchema& s) {
  std::ostringstream out;
  out << "name = " << s.name << "\n";
  out << "kb_size = " << s.kb_size << "\n";
  out << "max_turns = " << s.max_turns << "\n";
  out << "goal_constraints = " << s.goal_constraints_min << ".."
      << s.goal_constraints_max << "\n";
  out << "goal_requests = " << s.goal_requests_min << ".." << s.goal_requests_max
      << "\n";
  for (const SlotDef& slot : s.informable) {
    out << "informable " << slot.name << " = ";
    for (std::size_t i = 0; i < slot.vocab.size(); ++i) {
      if (i) out << ", ";
      out << slot.vocab[i];
    }
    out << "\n";
  }
  for (const SlotDef& slot : s.requestable) {
    out << "requestable " << slot.name;
    if (slot.vocab != auto_vocab(slot.name)) {
      out << " = ";
      for (std::size_t i = 0; i < slot.vocab.size(); ++i) {
        if (i) out << ", ";
        out << slot.vocab[i];
      }
    }
    out << "\n";
  }
  return out.str();
}

DomainSchema builtin_schema(const std::string& name) {
  DomainSchema s;
  s.name = name;
  if (name == "movie") {
    s.informable = {
        {"city", {"seattle", "portland", "boston", "chicago", "denver", "austin",
                  "atlanta", "miami", "phoenix", "dallas"}},
        {"date", {"monday", "tuesday", "wednesday", "thursday", "friday",
                  "saturday", "sunday"}},
        {"genre", {"action", "comedy", "drama", "horror", "romance", "scifi",
                   "thriller", "animation"}},
        {"numberofpeople", {"1", "2", "3", "4", "5"}},
        {"starttime", {"noon", "2pm", "5pm", "7pm", "9pm", "11pm"}},
    };
    s.requestable = {{"theater", {}}, {"ticketprice", {}}, {"rating", {}}};
    s.kb_size = 80;
    s.goal_constraints_min = 3;
    s.goal_constraints_max = 4;
    s.goal_requests_min = 1;
    s.goal_requests_max = 2;
  } else if (name == "restaurant") {
    s.informable = {
        {"atmosphere", {"casual", "romantic", "family", "business", "outdoor"}},
        {"city", {"seattle", "portland", "boston", "chicago", "denver", "austin",
                  "atlanta", "miami", "phoenix", "dallas"}},
        {"cuisine", {"italian", "thai", "mexican", "indian", "french", "japanese",
                     "greek", "korean", "vegan", "bbq"}},
        {"date", {"monday", "tuesday", "wednesday", "thursday", "friday",
                  "saturday", "sunday"}},
        {"numberofpeople", {"1", "2", "3", "4", "5", "6"}},
        {"pricerange", {"cheap", "moderate", "expensive", "luxury"}},
        {"time", {"11am", "noon", "1pm", "5pm", "6pm", "7pm", "8pm", "9pm"}},
    };
    s.requestable = {
        {"restaurantname", {}}, {"address", {}}, {"phone", {}}, {"dresscode", {}}};
    s.kb_size = 150;
    s.goal_constraints_min = 2;
    s.goal_constraints_max = 4;
    s.goal_requests_min = 1;
    s.goal_requests_max = 3;
  } else if (name == "taxi") {
    s.informable = {
        {"cartype", {"sedan", "suv", "van", "compact", "limo"}},
        {"date", {"monday", "tuesday", "wednesday", "thursday", "friday",
                  "saturday", "sunday"}},
        {"dropoff", {"airport", "downtown", "university", "stadium", "harbor",
                     "mall", "museum", "station", "park", "hospital"}},
        {"luggage", {"none", "small", "large"}},
        {"numberofpeople", {"1", "2", "3", "4", "5"}},
        {"payment", {"cash", "card", "app", "voucher"}},
        {"pickup", {"airport", "downtown", "university", "stadium", "harbor",
                    "mall", "museum", "station", "park", "hospital"}},
        {"pickuptime", {"6am", "8am", "10am", "noon", "2pm", "4pm", "6pm", "8pm",
                        "10pm", "midnight"}},
    };
    s.requestable = {{"fare", {}}, {"duration", {}}, {"drivername", {}},
                     {"plate", {}}, {"eta", {}}};
    s.kb_size = 150;
    s.goal_constraints_min = 3;
    s.goal_constraints_max = 5;
    s.goal_requests_min = 1;
    s.goal_requests_max = 3;
  } else {
    throw std::invalid_argument("unknown builtin schema: " + name);
  }
  for (SlotDef& slot : s.requestable) {
    if (slot.vocab.empty()) slot.vocab = auto_vocab(slot.name);
  }
  validate_schema(s);
  return s;
}

}  // namespace eierl
