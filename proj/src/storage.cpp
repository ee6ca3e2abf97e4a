#include "kbc/storage.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kbc {

static_assert(std::endian::native == std::endian::little,
              "model archives assume a little-endian host");

OptimizerState init_optimizer_state(const TrainConfig& config, const KnowledgeBase& kb) {
    OptimizerState st;
    st.entities.assign(kb.entities.size(), AdaGradState(config.dim));
    if (config.regime == Regime::L2Only)
        st.relations_adagrad.assign(kb.relations.size(), AdaGradState(config.dim));
    else
        st.relations_rda.assign(kb.relations.size(), RdaState(config.dim));
    return st;
}

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& path, std::size_t line_no,
                            const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

int parse_label(const std::string& path, std::size_t line_no, const std::string& field) {
    if (field == "1") return 1;
    if (field == "-1") return -1;
    malformed(path, line_no, "label must be \"1\" or \"-1\", got \"" + field + "\"");
}

}  // namespace

std::vector<LabeledTriplet> load_triple_file(const std::string& path, KnowledgeBase& kb,
                                             TripleFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triple file: " + path);

    std::vector<LabeledTriplet> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break;
            malformed(path, line_no, "empty line");
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        for (const auto& f : fields)
            if (f.empty()) malformed(path, line_no, "empty field");

        if (format == TripleFormat::Auto) {
            if (fields.size() == 3)
                format = TripleFormat::Unlabeled;
            else if (fields.size() == 4)
                format = TripleFormat::Labeled;
            else
                malformed(path, line_no, "expected 3 or 4 tab-separated fields");
        }
        std::size_t expect = format == TripleFormat::Labeled ? 4 : 3;
        if (fields.size() != expect)
            malformed(path, line_no,
                      "expected " + std::to_string(expect) + " fields, got " +
                          std::to_string(fields.size()));

        LabeledTriplet lt;
        lt.triplet.subject = kb.entities.add(fields[0]);
        lt.triplet.relation = kb.relations.add(fields[1]);
        lt.triplet.object = kb.entities.add(fields[2]);
        lt.label = expect == 4 ? parse_label(path, line_no, fields[3]) : 1;
        rows.push_back(lt);
    }
    return rows;
}

KnowledgeBase load_dataset(const std::string& train_path, const std::string& valid_path,
                           const std::string& test_path, TripleFormat format) {
    KnowledgeBase kb;
    if (!train_path.empty()) kb.train = load_triple_file(train_path, kb, format);
    if (!valid_path.empty()) kb.valid = load_triple_file(valid_path, kb, format);
    if (!test_path.empty()) kb.test = load_triple_file(test_path, kb, format);
    kb.rebuild_true_set();
    return kb;
}

void write_triple_file(const std::string& path, const KnowledgeBase& kb,
                       const std::vector<LabeledTriplet>& triples, bool labeled) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write triple file: " + path);
    for (const auto& lt : triples) {
        out << kb.entities.name(lt.triplet.subject) << '\t'
            << kb.relations.name(lt.triplet.relation) << '\t'
            << kb.entities.name(lt.triplet.object);
        if (labeled) out << '\t' << (lt.label == 1 ? "1" : "-1");
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

constexpr char kMagic[8] = {'K', 'B', 'C', 'M', 'D', 'L', '0', '1'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u64(std::string& buf, std::uint64_t v) {
    char b[8];
    std::memcpy(b, &v, 8);
    buf.append(b, 8);
}

void put_doubles(std::string& buf, const std::vector<double>& v) {
    buf.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
}

json config_to_json(const TrainConfig& c) {
    return json{{"dim", c.dim},
                {"lambda", c.lambda},
                {"alpha", c.alpha},
                {"eta", c.eta},
                {"epochs", c.epochs},
                {"negatives", c.negatives_per_positive},
                {"regime", std::string(to_string(c.regime))},
                {"minibatch", c.minibatch},
                {"seed", c.seed},
                {"rda_global_clock", c.rda_global_clock}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.dim = j.at("dim").get<std::size_t>();
    c.lambda = j.at("lambda").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.eta = j.at("eta").get<double>();
    c.epochs = j.at("epochs").get<std::uint64_t>();
    c.negatives_per_positive = j.at("negatives").get<std::uint32_t>();
    auto regime = regime_from_string(j.at("regime").get<std::string>());
    if (!regime) throw std::runtime_error("model archive: unknown regime");
    c.regime = *regime;
    c.minibatch = j.at("minibatch").get<std::uint32_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.rda_global_clock = j.at("rda_global_clock").get<bool>();
    return c;
}

class SectionReader {
public:
    SectionReader(const std::string& data, std::size_t offset)
        : data_(data), pos_(offset) {}

    std::vector<double> doubles(std::size_t count) {
        std::size_t bytes = count * sizeof(double);
        require(bytes);
        std::vector<double> out(count);
        std::memcpy(out.data(), data_.data() + pos_, bytes);
        pos_ += bytes;
        return out;
    }

    std::uint64_t u64() {
        require(8);
        std::uint64_t v;
        std::memcpy(&v, data_.data() + pos_, 8);
        pos_ += 8;
        return v;
    }

    std::size_t pos() const { return pos_; }

private:
    void require(std::size_t bytes) {
        if (pos_ + bytes > data_.size())
            throw std::runtime_error("model archive: truncated file");
    }
    const std::string& data_;
    std::size_t pos_;
};

}  // namespace

void save_model(const std::string& path, const ModelArchive& archive) {
    const auto& p = archive.params;
    if (p.entities.size() != archive.entity_names.size() ||
        p.relations.size() != archive.relation_names.size())
        throw std::invalid_argument("save_model: vocabulary/parameter count mismatch");

    json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["dim"] = p.dim;
    manifest["n_entities"] = p.entities.size();
    manifest["n_relations"] = p.relations.size();
    manifest["entities"] = archive.entity_names;
    manifest["relations"] = archive.relation_names;
    manifest["config"] = config_to_json(archive.config);
    manifest["next_epoch"] = archive.next_epoch;
    manifest["optimizer"] = json{
        {"relations", archive.opt.relations_rda.empty() ? "adagrad" : "rda"},
        {"epsilon", archive.opt.entities.empty() ? 1e-8 : archive.opt.entities[0].epsilon},
        {"global_step", archive.opt.global_step}};

    std::string body;
    auto emb_group = [&](const std::vector<ComplexEmbedding>& group) {
        for (const auto& e : group) {
            put_doubles(body, e.re);
            put_doubles(body, e.im);
        }
    };
    emb_group(p.entities);
    emb_group(p.relations);
    for (const auto& st : archive.opt.entities) {
        put_doubles(body, st.accum_re);
        put_doubles(body, st.accum_im);
    }
    for (const auto& st : archive.opt.relations_adagrad) {
        put_doubles(body, st.accum_re);
        put_doubles(body, st.accum_im);
    }
    for (const auto& st : archive.opt.relations_rda) {
        put_doubles(body, st.g_sum_re);
        put_doubles(body, st.g_sum_im);
        put_u64(body, st.step_count);
    }

    std::string blob(kMagic, sizeof(kMagic));
    std::string mtext = manifest.dump();
    put_u64(blob, mtext.size());
    blob += mtext;
    blob += body;

    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(blob.data()),
              static_cast<uInt>(blob.size())));
    char crc_bytes[4];
    std::memcpy(crc_bytes, &crc, 4);
    blob.append(crc_bytes, 4);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write model archive: " + path);
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

ModelArchive load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model archive: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string blob = ss.str();

    if (blob.size() < sizeof(kMagic) + 8 + 4)
        throw std::runtime_error("model archive: truncated file");
    if (std::memcmp(blob.data(), kMagic, 6) != 0)
        throw std::runtime_error("model archive: bad magic (not a model file)");
    if (std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("model archive: format version mismatch");

    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, blob.data() + blob.size() - 4, 4);
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(blob.data()),
              static_cast<uInt>(blob.size() - 4)));
    if (crc != stored_crc) throw std::runtime_error("model archive: checksum failure");

    SectionReader r(blob, sizeof(kMagic));
    std::uint64_t mlen = r.u64();
    if (r.pos() + mlen > blob.size() - 4)
        throw std::runtime_error("model archive: truncated file");
    json manifest = json::parse(blob.substr(r.pos(), mlen));
    if (manifest.at("format_version").get<std::uint32_t>() != kFormatVersion)
        throw std::runtime_error("model archive: format version mismatch");

    ModelArchive a;
    a.config = config_from_json(manifest.at("config"));
    a.next_epoch = manifest.at("next_epoch").get<std::uint64_t>();
    a.entity_names = manifest.at("entities").get<std::vector<std::string>>();
    a.relation_names = manifest.at("relations").get<std::vector<std::string>>();
    std::size_t dim = manifest.at("dim").get<std::size_t>();
    std::size_t n_ent = manifest.at("n_entities").get<std::size_t>();
    std::size_t n_rel = manifest.at("n_relations").get<std::size_t>();
    if (n_ent != a.entity_names.size() || n_rel != a.relation_names.size())
        throw std::runtime_error("model archive: inconsistent manifest");

    SectionReader body(blob, sizeof(kMagic) + 8 + mlen);
    a.params.dim = dim;
    auto read_group = [&](std::size_t count) {
        std::vector<ComplexEmbedding> group;
        group.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            ComplexEmbedding e;
            e.re = body.doubles(dim);
            e.im = body.doubles(dim);
            group.push_back(std::move(e));
        }
        return group;
    };
    a.params.entities = read_group(n_ent);
    a.params.relations = read_group(n_rel);

    double epsilon = manifest.at("optimizer").at("epsilon").get<double>();
    a.opt.global_step = manifest.at("optimizer").at("global_step").get<std::uint64_t>();
    a.opt.entities.reserve(n_ent);
    for (std::size_t i = 0; i < n_ent; ++i) {
        AdaGradState st;
        st.accum_re = body.doubles(dim);
        st.accum_im = body.doubles(dim);
        st.epsilon = epsilon;
        a.opt.entities.push_back(std::move(st));
    }
    std::string rel_opt = manifest.at("optimizer").at("relations").get<std::string>();
    if (rel_opt == "adagrad") {
        for (std::size_t i = 0; i < n_rel; ++i) {
            AdaGradState st;
            st.accum_re = body.doubles(dim);
            st.accum_im = body.doubles(dim);
            st.epsilon = epsilon;
            a.opt.relations_adagrad.push_back(std::move(st));
        }
    } else if (rel_opt == "rda") {
        for (std::size_t i = 0; i < n_rel; ++i) {
            RdaState st;
            st.g_sum_re = body.doubles(dim);
            st.g_sum_im = body.doubles(dim);
            st.step_count = body.u64();
            a.opt.relations_rda.push_back(std::move(st));
        }
    } else {
        throw std::runtime_error("model archive: unknown optimizer kind");
    }
    if (body.pos() != blob.size() - 4)
        throw std::runtime_error("model archive: trailing bytes");
    return a;
}

}  // namespace kbc
