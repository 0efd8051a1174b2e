#include "mwpr/synth.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "mwpr/error.hpp"

namespace mwpr {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorCode::InvalidArgument, "Rng::below(0)", "rng");
  }
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double word_overlap(std::string_view seed, std::string_view other) {
  const auto a = word_set(seed);
  const auto b = word_set(other);
  if (a.empty()) return 0.0;
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(a.size());
}

namespace {

enum class Step { Add, Sub, Mul, Div, Twice, Thrice, Half, Third };

constexpr std::array<Step, 8> kSteps = {Step::Add,   Step::Sub,   Step::Mul,
                                        Step::Div,   Step::Twice, Step::Thrice,
                                        Step::Half,  Step::Third};

bool uses_quantity(Step s) {
  return s == Step::Add || s == Step::Sub || s == Step::Mul || s == Step::Div;
}

char op_of(Step s) {
  switch (s) {
    case Step::Add: return '+';
    case Step::Sub: return '-';
    case Step::Mul:
    case Step::Twice:
    case Step::Thrice: return '*';
    case Step::Div:
    case Step::Half:
    case Step::Third: return '/';
  }
  return '+';
}

int constant_of(Step s) {
  switch (s) {
    case Step::Twice:
    case Step::Half: return 2;
    case Step::Thrice:
    case Step::Third: return 3;
    default: return 0;
  }
}

constexpr std::array<std::string_view, 32> kNames = {
    "John",  "Mary",   "Sam",    "Tia",    "Ravi",   "Lena",  "Omar",
    "Priya", "Diego",  "Hana",   "Kofi",   "Mei",    "Ivan",  "Zara",
    "Noah",  "Aisha",  "Lucas",  "Sofia",  "Kenji",  "Amara", "Felix",
    "Nina",  "Tariq",  "Chloe",  "Mateo",  "Yara",   "Ben",   "Ines",
    "Arjun", "Greta",  "Jonah",  "Leila"};

constexpr std::array<std::string_view, 32> kNouns = {
    "apples",   "oranges", "pencils",  "marbles",  "stickers", "cookies",
    "books",    "coins",   "balloons", "shells",   "stamps",   "cards",
    "buttons",  "cupcakes", "crayons", "beads",    "pebbles",  "ribbons",
    "tickets",  "candles", "erasers",  "feathers", "kites",    "lemons",
    "muffins",  "pears",   "plums",    "rocks",    "socks",    "toys",
    "tulips",   "whistles"};

constexpr std::array<std::string_view, 24> kTowns = {
    "Springfield", "Riverton", "Lakeside",  "Maplewood", "Fairview",
    "Brookfield",  "Hillcrest", "Oakdale",  "Pinecrest", "Greenville",
    "Ashford",     "Bayview",  "Cedarburg", "Dunmore",   "Elmhurst",
    "Foxborough",  "Glenwood", "Harbor",    "Ironwood",  "Juniper",
    "Kingsley",    "Linden",   "Millbrook", "Northgate"};

constexpr std::array<std::string_view, 16> kHobbies = {
    "painting",  "hiking",   "gardening", "cycling",  "swimming", "baking",
    "knitting",  "fishing",  "climbing",  "drawing",  "skating",  "reading",
    "juggling",  "sailing",  "camping",   "dancing"};

struct Problem {
  std::string name;
  std::string noun;
  std::string town;
  std::string hobby;
  long start = 0;
  std::vector<Step> steps;
  std::vector<long> quantities;  // one per step; unused for constant steps
};

std::string step_sentence(const Problem& p, Step s, long q) {
  const std::string& n = p.name;
  const std::string& o = p.noun;
  const std::string qs = std::to_string(q);
  // Paired phrasings differ in at most three words, so a single flipped
  // step keeps a distractor lexically close to its seed.
  switch (s) {
    case Step::Add: return "Later " + n + " added " + qs + " more " + o + ".";
    case Step::Sub: return "Later " + n + " removed " + qs + " of the " + o + ".";
    case Step::Mul: return "Later " + n + " multiplied the " + o + " by " + qs + ".";
    case Step::Div: return "Later " + n + " divided the " + o + " by " + qs + ".";
    case Step::Twice: return "Later " + n + " doubled the " + o + ".";
    case Step::Half: return "Later " + n + " halved the " + o + ".";
    case Step::Thrice: return "Later " + n + " had three times the " + o + ".";
    case Step::Third: return "Later " + n + " had one third of the " + o + ".";
  }
  return {};
}

std::string render_text(const Problem& p) {
  std::string t = p.name + " lives in " + p.town + " and enjoys " + p.hobby +
                  " on weekends. " + p.name + " had " +
                  std::to_string(p.start) + " " + p.noun + ".";
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    t += " " + step_sentence(p, p.steps[i], p.quantities[i]);
  }
  t += " How many " + p.noun + " does " + p.name + " have now?";
  return t;
}

std::string render_equation(const Problem& p) {
  std::string expr = std::to_string(p.start);
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const Step s = p.steps[i];
    const long operand = uses_quantity(s) ? p.quantities[i] : constant_of(s);
    expr = "(" + expr + " " + op_of(s) + " " + std::to_string(operand) + ")";
  }
  return "x = " + expr;
}

double evaluate(const Problem& p) {
  double v = static_cast<double>(p.start);
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const Step s = p.steps[i];
    const double operand = uses_quantity(s)
                               ? static_cast<double>(p.quantities[i])
                               : static_cast<double>(constant_of(s));
    switch (op_of(s)) {
      case '+': v += operand; break;
      case '-': v -= operand; break;
      case '*': v *= operand; break;
      case '/': v /= operand; break;
    }
  }
  return v;
}

template <std::size_t N>
std::string pick_word(Rng& rng, const std::array<std::string_view, N>& items) {
  return std::string(items[rng.below(N)]);
}

// Distinct quantities in [4, 60]; 2 and 3 are reserved for the constant
// phrases so every text numeral maps to exactly one equation operand.
void draw_quantities(Rng& rng, Problem& p) {
  std::vector<long> used;
  auto fresh = [&] {
    for (;;) {
      const long q = rng.between(4, 60);
      if (std::find(used.begin(), used.end(), q) == used.end()) {
        used.push_back(q);
        return q;
      }
    }
  };
  p.start = fresh();
  p.quantities.assign(p.steps.size(), 0);
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (uses_quantity(p.steps[i])) p.quantities[i] = fresh();
  }
}

void draw_surface(Rng& rng, Problem& p) {
  p.name = pick_word(rng, kNames);
  p.noun = pick_word(rng, kNouns);
  p.town = pick_word(rng, kTowns);
  p.hobby = pick_word(rng, kHobbies);
}

Step flip(Rng& rng, Step s) {
  switch (s) {
    case Step::Twice: return Step::Half;
    case Step::Half: return Step::Twice;
    case Step::Thrice: return Step::Third;
    case Step::Third: return Step::Thrice;
    default: {
      constexpr std::array<Step, 4> kQuantitySteps = {Step::Add, Step::Sub,
                                                      Step::Mul, Step::Div};
      Step out = s;
      while (out == s) out = kQuantitySteps[rng.below(4)];
      return out;
    }
  }
}

MWPRecord to_record(const Problem& p, std::string id) {
  return make_record(std::move(id), render_text(p), render_equation(p),
                     "synthetic", evaluate(p));
}

std::string family_id(std::size_t family) {
  char buf[16];
  auto res = std::to_chars(buf, buf + sizeof buf, family);
  std::string digits(buf, res.ptr);
  while (digits.size() < 5) digits.insert(digits.begin(), '0');
  return "f" + digits;
}

}  // namespace

SynthCorpus generate_synthetic(const SynthOptions& options) {
  SynthCorpus out;
  if (options.n == 0) return out;
  Rng rng(options.seed);
  out.records.reserve(options.n);

  for (std::size_t family = 0; out.records.size() < options.n; ++family) {
    Problem seed;
    const std::size_t length = static_cast<std::size_t>(rng.between(1, 3));
    for (std::size_t i = 0; i < length; ++i) {
      seed.steps.push_back(kSteps[rng.below(kSteps.size())]);
    }
    draw_surface(rng, seed);
    draw_quantities(rng, seed);

    const std::string fid = family_id(family);
    out.records.push_back(to_record(seed, fid + "-seed"));
    out.seed_ids.push_back(out.records.back().id);

    for (std::size_t d = 0;
         d < options.duplicates && out.records.size() < options.n; ++d) {
      Problem dup;
      dup.steps = seed.steps;
      do {
        draw_surface(rng, dup);
      } while (dup.name == seed.name || dup.noun == seed.noun);
      draw_quantities(rng, dup);
      out.records.push_back(to_record(dup, fid + "-dup" + std::to_string(d)));
    }
    for (std::size_t x = 0;
         x < options.distractors && out.records.size() < options.n; ++x) {
      Problem dis = seed;
      const std::size_t at = rng.below(dis.steps.size());
      const Step flipped = flip(rng, dis.steps[at]);
      dis.steps[at] = flipped;
      out.records.push_back(to_record(dis, fid + "-dis" + std::to_string(x)));
    }
  }
  return out;
}

}  // namespace mwpr
