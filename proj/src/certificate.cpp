#include "tlc/certificate.hpp"

#include <json.hpp>

#include "tlc/error.hpp"
#include "tlc/syntax.hpp"

namespace tlc {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

const std::pair<CertificateKind, const char*> kKinds[] = {
    {CertificateKind::LambdaSeparation, "lambda-separation"},
    {CertificateKind::ProductSeparation, "product-separation"},
    {CertificateKind::CccCollapse, "ccc-collapse"},
};

std::map<std::string, std::string> toolchain() {
    return {{"tool", "tlc"}, {"version", kToolVersion}, {"compiler", std::string("g++ ") + __VERSION__}};
}

// ---- Writing ---------------------------------------------------------------

class Writer {
public:
    Json type(Type t) { return to_string(t, &table_); }

    Json term(const Term& t) {
        if (!t) return nullptr;
        std::string text = to_string(t, &table_);
        auto fv = free_vars(t);
        if (fv.empty()) return text;
        Json ctx = Json::array();
        for (const auto& [name, ty] : fv) ctx.push_back(Json::array({name, type(ty)}));
        return Json{{"term", text}, {"context", ctx}};
    }

    Json terms(const std::vector<Term>& ts) {
        Json out = Json::array();
        for (const auto& t : ts) out.push_back(term(t));
        return out;
    }

    Json arrow(const Arrow& f) { return f ? Json(to_string(f, &table_)) : Json(nullptr); }

    Json substitution(const TypeSubstitution& sub) {
        Json out = Json::object();
        for (const auto& [atom, ty] : sub) out[atom] = type(ty);
        return out;
    }

    Json separation(const SeparationCertificate& c) {
        Json model{{"base", c.model.base}, {"args", Json::array()}, {"relabeling", c.model.relabeling}};
        for (const auto& f : c.model.args) model["args"].push_back(Json{{"type", type(f.type)}, {"code", f.code}});
        Json bound = Json::array();
        for (const auto& [name, ty] : c.bound_vars) bound.push_back(Json::array({name, type(ty)}));
        return Json{{"a", term(c.a)},
                    {"b", term(c.b)},
                    {"a_prime", term(c.a_prime)},
                    {"b_prime", term(c.b_prime)},
                    {"bound_vars", bound},
                    {"level", c.level},
                    {"model", model},
                    {"kappas", c.kappas},
                    {"definer_count", c.definer_count},
                    {"head_args", terms(c.head_args)},
                    {"c", term(c.c)},
                    {"d", term(c.d)},
                    {"two_valued", c.two_valued}};
    }

    Json product(const ProductCertificate& c) {
        Json iso{{"source", type(c.iso.source)},
                 {"target", type(c.iso.target)},
                 {"forward", term(c.iso.forward)},
                 {"backward", term(c.iso.backward)}};
        return Json{{"a", term(c.a)},
                    {"b", term(c.b)},
                    {"a_prime", term(c.a_prime)},
                    {"b_prime", term(c.b_prime)},
                    {"substitution", substitution(c.substitution)},
                    {"iso", iso},
                    {"arity", c.arity},
                    {"index", c.index},
                    {"slot", type(c.slot)},
                    {"component", separation(c.component)}};
    }

    Json collapse(const CollapseCertificate& c) {
        return Json{{"f", arrow(c.f)},
                    {"g", arrow(c.g)},
                    {"substitution", substitution(c.substitution)},
                    {"f_instance", arrow(c.f_instance)},
                    {"g_instance", arrow(c.g_instance)},
                    {"context", c.context ? arrow(*c.context) : Json(nullptr)},
                    {"separation", c.separation ? product(*c.separation) : Json(nullptr)},
                    {"object", type(c.object)},
                    {"target1", arrow(c.target1)},
                    {"target2", arrow(c.target2)},
                    {"schema", c.schema}};
    }

    const std::vector<std::string>& entries() const { return table_.entries(); }

private:
    TypeTable table_;
};

// ---- Reading ---------------------------------------------------------------

class Reader {
public:
    explicit Reader(std::vector<Type> refs) : refs_(std::move(refs)) {}

    Type type(const Json& j, const char* field) const {
        return guard(field, [&] { return parse_type(j.get<std::string>(), &refs_); });
    }

    Term term(const Json& j, const char* field) const {
        if (j.is_null()) return {};
        return guard(field, [&] {
            if (j.is_string()) return parse_term(j.get<std::string>(), {}, &refs_);
            Context ctx;
            for (const auto& entry : j.at("context")) ctx.add(entry.at(0).get<std::string>(), type(entry.at(1), field));
            return parse_term(j.at("term").get<std::string>(), ctx, &refs_);
        });
    }

    std::vector<Term> terms(const Json& j, const char* field) const {
        std::vector<Term> out;
        for (const auto& t : j) out.push_back(term(t, field));
        return out;
    }

    Arrow arrow(const Json& j, const char* field) const {
        if (j.is_null()) return {};
        return guard(field, [&] { return parse_arrow(j.get<std::string>(), &refs_); });
    }

    TypeSubstitution substitution(const Json& j) const {
        TypeSubstitution sub;
        for (const auto& [atom, ty] : j.items()) sub.emplace(atom, type(ty, "substitution"));
        return sub;
    }

    SeparationCertificate separation(const Json& j) const {
        SeparationCertificate c;
        c.a = term(j.at("a"), "a");
        c.b = term(j.at("b"), "b");
        c.a_prime = term(j.at("a_prime"), "a_prime");
        c.b_prime = term(j.at("b_prime"), "b_prime");
        for (const auto& entry : j.at("bound_vars"))
            c.bound_vars.emplace_back(entry.at(0).get<std::string>(), type(entry.at(1), "bound_vars"));
        c.level = j.at("level").get<unsigned>();
        const Json& model = j.at("model");
        c.model.base = model.at("base").get<unsigned>();
        for (const auto& f : model.at("args"))
            c.model.args.push_back(Functional{type(f.at("type"), "model.args"), f.at("code").get<std::uint64_t>()});
        c.model.relabeling = model.at("relabeling").get<std::vector<unsigned>>();
        c.kappas = j.at("kappas").get<std::vector<std::uint64_t>>();
        c.definer_count = j.at("definer_count").get<std::size_t>();
        c.head_args = terms(j.at("head_args"), "head_args");
        c.c = term(j.at("c"), "c");
        c.d = term(j.at("d"), "d");
        c.two_valued = j.at("two_valued").get<bool>();
        return c;
    }

    ProductCertificate product(const Json& j) const {
        ProductCertificate c;
        c.a = term(j.at("a"), "a");
        c.b = term(j.at("b"), "b");
        c.a_prime = term(j.at("a_prime"), "a_prime");
        c.b_prime = term(j.at("b_prime"), "b_prime");
        c.substitution = substitution(j.at("substitution"));
        const Json& iso = j.at("iso");
        c.iso.source = type(iso.at("source"), "iso.source");
        c.iso.target = type(iso.at("target"), "iso.target");
        c.iso.forward = term(iso.at("forward"), "iso.forward");
        c.iso.backward = term(iso.at("backward"), "iso.backward");
        c.arity = j.at("arity").get<std::size_t>();
        c.index = j.at("index").get<std::size_t>();
        c.slot = type(j.at("slot"), "slot");
        c.component = separation(j.at("component"));
        return c;
    }

    CollapseCertificate collapse(const Json& j) const {
        CollapseCertificate c;
        c.f = arrow(j.at("f"), "f");
        c.g = arrow(j.at("g"), "g");
        c.substitution = substitution(j.at("substitution"));
        c.f_instance = arrow(j.at("f_instance"), "f_instance");
        c.g_instance = arrow(j.at("g_instance"), "g_instance");
        if (!j.at("context").is_null()) c.context = arrow(j.at("context"), "context");
        if (!j.at("separation").is_null()) c.separation = product(j.at("separation"));
        c.object = type(j.at("object"), "object");
        c.target1 = arrow(j.at("target1"), "target1");
        c.target2 = arrow(j.at("target2"), "target2");
        c.schema = j.at("schema").get<std::string>();
        return c;
    }

private:
    template <class F>
    static auto guard(const char* field, F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const Error& e) {
            throw SchemaError(std::string("field '") + field + "': " + e.what());
        }
    }

    std::vector<Type> refs_;
};

bool replay_trace(const ProductCertificate& cert, const RuleTrace& trace) {
    Type t = cert.iso.source;
    try {
        for (const auto& [path, rule] : trace) t = replace_at(t, path, contract(subtype_at(t, path), rule));
    } catch (const Error&) {
        return false;
    }
    return t == cert.iso.target && is_product_normal(t);
}

}  // namespace

std::string kind_name(CertificateKind kind) {
    for (const auto& [k, name] : kKinds)
        if (k == kind) return name;
    throw SchemaError("unknown certificate kind");
}

CertificateKind parse_kind(const std::string& name) {
    for (const auto& [k, n] : kKinds)
        if (name == n) return k;
    throw SchemaError("unknown certificate kind '" + name + "'");
}

CertificateEnvelope wrap(SeparationCertificate cert) {
    CertificateEnvelope e;
    e.kind = CertificateKind::LambdaSeparation;
    e.payload = std::move(cert);
    e.toolchain = toolchain();
    return e;
}

CertificateEnvelope wrap(ProductCertificate cert) {
    CertificateEnvelope e;
    e.kind = CertificateKind::ProductSeparation;
    TypeNFOptions opts;
    opts.record_measures = false;
    for (const auto& step : type_nf(cert.iso.source, opts).steps) e.trace.emplace_back(step.position, step.rule);
    e.payload = std::move(cert);
    e.toolchain = toolchain();
    return e;
}

CertificateEnvelope wrap(CollapseCertificate cert) {
    CertificateEnvelope e;
    e.kind = CertificateKind::CccCollapse;
    e.payload = std::move(cert);
    e.toolchain = toolchain();
    return e;
}

std::string serialize(const CertificateEnvelope& envelope) {
    Writer w;
    Json payload;
    switch (envelope.kind) {
    case CertificateKind::LambdaSeparation:
        payload = w.separation(std::get<SeparationCertificate>(envelope.payload));
        break;
    case CertificateKind::ProductSeparation:
        payload = w.product(std::get<ProductCertificate>(envelope.payload));
        break;
    case CertificateKind::CccCollapse:
        payload = w.collapse(std::get<CollapseCertificate>(envelope.payload));
        break;
    }
    Json trace = Json::array();
    for (const auto& [path, rule] : envelope.trace) trace.push_back(Json{{"position", path}, {"rule", rule_name(rule)}});
    Json out{{"schema", kCertificateSchema},
             {"version", envelope.version},
             {"kind", kind_name(envelope.kind)},
             {"toolchain", envelope.toolchain},
             {"types", w.entries()},
             {"payload", payload}};
    if (envelope.kind == CertificateKind::ProductSeparation) out["trace"] = trace;
    return out.dump(2) + "\n";
}

CertificateEnvelope parse_certificate(std::string_view json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("schema", "") != kCertificateSchema)
            throw SchemaError("missing or unknown schema tag");
        CertificateEnvelope e;
        e.version = j.at("version").get<int>();
        if (e.version != kCertificateVersion)
            throw SchemaError("unsupported version " + std::to_string(e.version) + ", expected " +
                              std::to_string(kCertificateVersion));
        e.kind = parse_kind(j.at("kind").get<std::string>());
        e.toolchain = j.at("toolchain").get<std::map<std::string, std::string>>();
        std::vector<Type> refs;
        try {
            refs = TypeTable::resolve(j.at("types").get<std::vector<std::string>>());
        } catch (const Error& err) {
            throw SchemaError(std::string("type table: ") + err.what());
        }
        Reader r(std::move(refs));
        const Json& payload = j.at("payload");
        switch (e.kind) {
        case CertificateKind::LambdaSeparation:
            e.payload = r.separation(payload);
            break;
        case CertificateKind::ProductSeparation:
            e.payload = r.product(payload);
            for (const auto& step : j.at("trace"))
                e.trace.emplace_back(step.at("position").get<std::string>(),
                                     parse_rule(step.at("rule").get<std::string>()));
            break;
        case CertificateKind::CccCollapse:
            e.payload = r.collapse(payload);
            break;
        }
        return e;
    } catch (const Json::exception& e) {
        throw SchemaError(e.what());
    }
}

bool verify(const CertificateEnvelope& envelope) {
    switch (envelope.kind) {
    case CertificateKind::LambdaSeparation:
        return verify(std::get<SeparationCertificate>(envelope.payload));
    case CertificateKind::ProductSeparation: {
        const auto& cert = std::get<ProductCertificate>(envelope.payload);
        return replay_trace(cert, envelope.trace) && verify(cert);
    }
    case CertificateKind::CccCollapse:
        return verify(std::get<CollapseCertificate>(envelope.payload));
    }
    return false;
}

}  // namespace tlc
