#include "cascata/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "cascata/errors.hpp"
#include "cascata/ioutil.hpp"

namespace cascata {

namespace {

using nlohmann::json;

bool valid_annotation(const Annotation& a) {
    return (a.e == -1 || a.e == 0 || a.e == 1) && a.w >= 0 && a.soc >= 0 && a.cog >= 0 &&
           a.soc <= a.w && a.cog <= a.w;
}

// A line carries an annotation only when all four of e/soc/cog/w are
// present; a partial set is treated as malformed.
struct LineResult {
    TweetRecord record;
    bool ok = false;
};

bool get_string(const json& j, const char* key, std::string& out) {
    const auto it = j.find(key);
    if (it == j.end()) return false;
    if (it->is_string()) {
        out = it->get<std::string>();
        return !out.empty();
    }
    if (it->is_number_integer()) {
        out = std::to_string(it->get<std::int64_t>());
        return true;
    }
    return false;
}

bool get_int(const json& j, const char* key, std::int64_t& out, bool& present) {
    const auto it = j.find(key);
    if (it == j.end()) {
        present = false;
        return true;
    }
    present = true;
    if (!it->is_number_integer()) return false;
    out = it->get<std::int64_t>();
    return true;
}

LineResult parse_jsonl_line(const std::string& line) {
    LineResult r;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return r;
    if (!get_string(j, "tweet_id", r.record.tweet_id)) return r;
    if (!get_string(j, "author_id", r.record.author_id)) return r;
    std::int64_t ts = 0;
    bool ts_present = false;
    if (!get_int(j, "timestamp", ts, ts_present) || !ts_present) return r;
    r.record.timestamp = ts;
    if (const auto it = j.find("text"); it != j.end()) {
        if (!it->is_string()) return r;
        r.record.text = it->get<std::string>();
    }
    std::int64_t e = 0, soc = 0, cog = 0, w = 0;
    bool pe = false, ps = false, pc = false, pw = false;
    if (!get_int(j, "e", e, pe) || !get_int(j, "soc", soc, ps) || !get_int(j, "cog", cog, pc) ||
        !get_int(j, "w", w, pw))
        return r;
    if (pe || ps || pc || pw) {
        if (!(pe && ps && pc && pw)) return r;
        Annotation a;
        a.e = static_cast<int>(e);
        a.soc = static_cast<std::int32_t>(soc);
        a.cog = static_cast<std::int32_t>(cog);
        a.w = static_cast<std::int32_t>(w);
        if (!valid_annotation(a)) return r;
        r.record.annotation = a;
    }
    if (!r.record.text && !r.record.annotation) return r;
    r.ok = true;
    return r;
}

bool parse_i64(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-') {
        neg = true;
        i = 1;
        if (s.size() == 1) return false;
    }
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = neg ? -v : v;
    return true;
}

struct TsvColumns {
    int tweet_id = -1, author_id = -1, timestamp = -1, text = -1;
    int e = -1, soc = -1, cog = -1, w = -1;
};

LineResult parse_tsv_line(const std::vector<std::string_view>& fields, const TsvColumns& cols) {
    LineResult r;
    auto field = [&](int idx) -> std::string_view {
        if (idx < 0 || static_cast<std::size_t>(idx) >= fields.size()) return {};
        return fields[static_cast<std::size_t>(idx)];
    };
    const auto id = field(cols.tweet_id);
    const auto author = field(cols.author_id);
    if (id.empty() || author.empty()) return r;
    r.record.tweet_id = std::string(id);
    r.record.author_id = std::string(author);
    if (!parse_i64(field(cols.timestamp), r.record.timestamp)) return r;
    if (const auto text = field(cols.text); !text.empty()) r.record.text = std::string(text);
    const auto fe = field(cols.e);
    const auto fs = field(cols.soc);
    const auto fc = field(cols.cog);
    const auto fw = field(cols.w);
    const bool any = !fe.empty() || !fs.empty() || !fc.empty() || !fw.empty();
    if (any) {
        std::int64_t e = 0, soc = 0, cog = 0, w = 0;
        if (!parse_i64(fe, e) || !parse_i64(fs, soc) || !parse_i64(fc, cog) || !parse_i64(fw, w))
            return r;
        Annotation a{static_cast<int>(e), static_cast<std::int32_t>(soc),
                     static_cast<std::int32_t>(cog), static_cast<std::int32_t>(w)};
        if (!valid_annotation(a)) return r;
        r.record.annotation = a;
    }
    if (!r.record.text && !r.record.annotation) return r;
    r.ok = true;
    return r;
}

} // namespace

CorpusFormat corpus_format_from_name(const std::string& name) {
    if (name == "jsonl") return CorpusFormat::jsonl;
    if (name == "tsv") return CorpusFormat::tsv;
    throw_invalid("unknown corpus format '" + name + "' (expected jsonl or tsv)");
}

Corpus Corpus::parse_file(const std::string& path, CorpusFormat format,
                          const CorpusOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open corpus file: " + path);
    return parse_stream(in, format, options);
}

Corpus Corpus::parse_stream(std::istream& in, CorpusFormat format, const CorpusOptions& options) {
    Corpus c;
    std::string line;
    if (format == CorpusFormat::jsonl) {
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            LineResult r = parse_jsonl_line(line);
            if (r.ok)
                c.tweets_.push_back(std::move(r.record));
            else
                ++c.skipped_lines_;
        }
    } else {
        if (!std::getline(in, line)) throw_empty("empty corpus");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        TsvColumns cols;
        {
            const auto header = split_tabs(line);
            for (std::size_t i = 0; i < header.size(); ++i) {
                const auto name = header[i];
                const int idx = static_cast<int>(i);
                if (name == "tweet_id") cols.tweet_id = idx;
                else if (name == "author_id") cols.author_id = idx;
                else if (name == "timestamp") cols.timestamp = idx;
                else if (name == "text") cols.text = idx;
                else if (name == "e") cols.e = idx;
                else if (name == "soc") cols.soc = idx;
                else if (name == "cog") cols.cog = idx;
                else if (name == "w") cols.w = idx;
            }
        }
        if (cols.tweet_id < 0 || cols.author_id < 0 || cols.timestamp < 0)
            throw_parse("corpus TSV header must name tweet_id, author_id, timestamp");
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            LineResult r = parse_tsv_line(split_tabs(line), cols);
            if (r.ok)
                c.tweets_.push_back(std::move(r.record));
            else
                ++c.skipped_lines_;
        }
    }
    c.finalize(options);
    return c;
}

Corpus Corpus::from_records(std::vector<TweetRecord> records, const CorpusOptions& options) {
    Corpus c;
    c.tweets_ = std::move(records);
    c.finalize(options);
    return c;
}

void Corpus::finalize(const CorpusOptions& options) {
    if (options.window_width <= 0) throw_invalid("window_width must be positive");
    if (tweets_.empty()) throw_empty("empty corpus");
    std::sort(tweets_.begin(), tweets_.end(), [](const TweetRecord& a, const TweetRecord& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        return a.tweet_id < b.tweet_id;
    });
    std::unordered_set<std::string_view> seen;
    seen.reserve(tweets_.size() * 2);
    for (const auto& t : tweets_) {
        if (!seen.insert(t.tweet_id).second)
            throw_parse("duplicate tweet_id '" + t.tweet_id + "'");
        if (!t.text && !t.annotation)
            throw_parse("tweet '" + t.tweet_id + "' has neither text nor annotation");
        if (t.annotation && !valid_annotation(*t.annotation))
            throw_parse("tweet '" + t.tweet_id + "' has an invalid annotation");
    }
    window_width_ = options.window_width;
    if (options.origin) {
        origin_ = *options.origin;
    } else {
        // midnight UTC of the earliest tweet's day
        origin_ = floor_div(tweets_.front().timestamp, 86400) * 86400;
    }
}

std::int64_t Corpus::window_index(std::int64_t timestamp) const {
    return floor_div(timestamp - origin_, window_width_);
}

bool Corpus::fully_annotated() const {
    return std::all_of(tweets_.begin(), tweets_.end(),
                       [](const TweetRecord& t) { return t.annotation.has_value(); });
}

void Corpus::set_annotation(std::size_t index, const Annotation& a) {
    tweets_.at(index).annotation = a;
}

void Corpus::save_jsonl(std::ostream& out) const {
    std::string buf;
    for (const auto& t : tweets_) {
        buf.clear();
        buf += "{\"tweet_id\":\"";
        buf += json_escape(t.tweet_id);
        buf += "\",\"author_id\":\"";
        buf += json_escape(t.author_id);
        buf += "\",\"timestamp\":";
        buf += std::to_string(t.timestamp);
        if (t.text) {
            buf += ",\"text\":\"";
            buf += json_escape(*t.text);
            buf += "\"";
        }
        if (t.annotation) {
            const Annotation& a = *t.annotation;
            buf += ",\"e\":";
            buf += std::to_string(a.e);
            buf += ",\"soc\":";
            buf += std::to_string(a.soc);
            buf += ",\"cog\":";
            buf += std::to_string(a.cog);
            buf += ",\"w\":";
            buf += std::to_string(a.w);
        }
        buf += "}\n";
        out << buf;
    }
}

void Corpus::save_jsonl_file(const std::string& path) const {
    std::ofstream out = open_output(path);
    save_jsonl(out);
}

} // namespace cascata
