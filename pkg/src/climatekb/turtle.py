"""Deterministic Turtle export and a parser for the same grammar subset.

The document shape is fixed: a prefix block (rdf, rdfs, owl, xsd and the
default KB prefix), one ontology header triple, then individuals sorted by
id. Entities are ``:ClimateConcept`` individuals carrying label, key and
tuple fields as data properties plus ``:causes`` object links; each edge is
reified as a ``:CausalLink`` individual so its evidence sentences can ride
along as ``:hasEvidence`` annotations of the form
``"article_id|sentence_index|text"``. Identical snapshots serialize to
identical bytes.
"""

from __future__ import annotations

from .canonical import CanonicalEntity
from .errors import IntegrityError, TurtleImportError, TurtleSyntaxError
from .kbstore import CausalEdge, KBSnapshot, SentenceRef
from .values import VALUE_ORDER, PersonalValue, neutral_associations

KB_IRI = "https://climatekb.example/kb"
PREFIXES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "owl": "http://www.w3.org/2002/07/owl#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "": KB_IRI + "#",
}

_ASSOC_PROPERTY = {
    PersonalValue.CONFORMITY: "assocConformity",
    PersonalValue.TRADITION: "assocTradition",
    PersonalValue.BENEVOLENCE: "assocBenevolence",
    PersonalValue.UNIVERSALISM: "assocUniversalism",
    PersonalValue.SELF_DIRECTION: "assocSelfDirection",
    PersonalValue.STIMULATION: "assocStimulation",
    PersonalValue.HEDONISM: "assocHedonism",
    PersonalValue.ACHIEVEMENT: "assocAchievement",
    PersonalValue.POWER: "assocPower",
    PersonalValue.SECURITY: "assocSecurity",
}
_ASSOC_VALUE = {name: value for value, name in _ASSOC_PROPERTY.items()}

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            raise ValueError(f"control character {ch!r} not representable in the Turtle subset")
        else:
            out.append(ch)
    return "".join(out)


def _evidence_literal(ref: SentenceRef) -> str:
    if "|" in ref.article_id:
        raise ValueError(f"article id {ref.article_id!r} may not contain '|'")
    return f"{ref.article_id}|{ref.sentence_index}|{ref.text}"


def export_turtle(kb: KBSnapshot) -> str:
    """Serialize a KB snapshot to Turtle; byte-stable for equal snapshots."""
    kb.check_integrity()
    lines = [
        "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .",
        "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .",
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .",
        "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .",
        f"@prefix : <{KB_IRI}#> .",
        "",
        f"<{KB_IRI}> a owl:Ontology .",
    ]
    edges = kb.sorted_edges()
    outgoing: dict[str, list[str]] = {}
    for edge in edges:
        outgoing.setdefault(edge.cause_id, []).append(edge.effect_id)
    for entity in kb.sorted_entities():
        lines.append("")
        parts = [f":{entity.id} a :ClimateConcept"]
        parts.append(f'rdfs:label "{_escape(entity.label)}"')
        parts.append(f':hasKey "{_escape(entity.key)}"')
        if entity.state:
            parts.append(f':hasState "{_escape(entity.state)}"')
        if entity.base:
            parts.append(f':hasBase "{_escape(entity.base)}"')
        if entity.unit:
            parts.append(f':hasUnit "{_escape(entity.unit)}"')
        if entity.curated:
            for value in VALUE_ORDER:
                parts.append(
                    f':{_ASSOC_PROPERTY[value]} "{entity.associations[value]}"^^xsd:integer')
        for effect_id in sorted(outgoing.get(entity.id, [])):
            parts.append(f":causes :{effect_id}")
        lines.append(" ;\n    ".join(parts) + " .")
    for ordinal, edge in enumerate(edges, start=1):
        lines.append("")
        parts = [f":l{ordinal:04d} a :CausalLink"]
        parts.append(f":hasCause :{edge.cause_id}")
        parts.append(f":hasEffect :{edge.effect_id}")
        for ref in sorted(edge.evidence, key=lambda r: (r.article_id, r.sentence_index, r.text)):
            parts.append(f':hasEvidence "{_escape(_evidence_literal(ref))}"')
        lines.append(" ;\n    ".join(parts) + " .")
    return "\n".join(lines) + "\n"


# --- parsing ------------------------------------------------------------------


class _Token:
    __slots__ = ("kind", "value", "datatype", "line", "column")

    def __init__(self, kind: str, value: str, line: int, column: int, datatype: str | None = None):
        self.kind = kind  # iri | pname | literal | punct | word | eof
        self.value = value
        self.datatype = datatype
        self.line = line
        self.column = column


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def _error(self, message: str) -> TurtleSyntaxError:
        return TurtleSyntaxError(message, self.line, self.column)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def tokens(self) -> list[_Token]:
        out = []
        while True:
            token = self.next_token()
            out.append(token)
            if token.kind == "eof":
                return out

    def next_token(self) -> _Token:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self._advance()
            elif ch == "#":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
            else:
                break
        if self.pos >= len(text):
            return _Token("eof", "", self.line, self.column)
        line, column = self.line, self.column
        ch = text[self.pos]
        if ch in ";.,":
            self._advance()
            return _Token("punct", ch, line, column)
        if ch == "<":
            end = text.find(">", self.pos + 1)
            if end == -1:
                raise self._error("unterminated IRI")
            value = text[self.pos + 1 : end]
            self._advance(end - self.pos + 1)
            return _Token("iri", value, line, column)
        if ch == '"':
            self._advance()
            chars = []
            while True:
                if self.pos >= len(text):
                    raise self._error("unterminated string literal")
                c = text[self.pos]
                if c == "\\":
                    if self.pos + 1 >= len(text):
                        raise self._error("dangling escape")
                    nxt = text[self.pos + 1]
                    mapping = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}
                    if nxt not in mapping:
                        raise self._error(f"unsupported escape \\{nxt}")
                    chars.append(mapping[nxt])
                    self._advance(2)
                elif c == '"':
                    self._advance()
                    break
                elif c == "\n":
                    raise self._error("newline inside string literal")
                else:
                    chars.append(c)
                    self._advance()
            datatype = None
            if text.startswith("^^", self.pos):
                self._advance(2)
                dt = self.next_token()
                if dt.kind not in ("pname", "iri", "word"):
                    raise self._error("expected datatype after ^^")
                datatype = dt.value
            return _Token("literal", "".join(chars), line, column, datatype=datatype)
        # bareword: @prefix, pnames, 'a', bare integers
        start = self.pos
        while self.pos < len(text) and not text[self.pos].isspace() and text[self.pos] not in ";,":
            self._advance()
        word = text[start : self.pos]
        # a trailing statement dot sticks to the word; split it back off
        if len(word) > 1 and word.endswith(".") and not word[:-1].endswith("."):
            word = word[:-1]
            self.pos -= 1
            self.column -= 1
        if ":" in word:
            return _Token("pname", word, line, column)
        return _Token("word", word, line, column)


class _Parser:
    """Statement-level parser for the exported subset."""

    def __init__(self, text: str):
        self.tokens = _Tokenizer(text).tokens()
        self.index = 0
        self.prefixes: dict[str, str] = {}

    def _peek(self) -> _Token:
        return self.tokens[self.index]

    def _next(self) -> _Token:
        token = self.tokens[self.index]
        if token.kind != "eof":
            self.index += 1
        return token

    def _error(self, token: _Token, message: str) -> TurtleSyntaxError:
        return TurtleSyntaxError(message, token.line, token.column)

    def _expect_punct(self, value: str) -> None:
        token = self._next()
        if token.kind != "punct" or token.value != value:
            raise self._error(token, f"expected {value!r}, got {token.value!r}")

    def _resolve(self, token: _Token) -> str:
        if token.kind == "iri":
            return token.value
        if token.kind == "word" and token.value == "a":
            return PREFIXES["rdf"] + "type"
        if token.kind == "pname":
            prefix, _, local = token.value.partition(":")
            if prefix not in self.prefixes:
                raise self._error(token, f"undeclared prefix {prefix!r}")
            return self.prefixes[prefix] + local
        raise self._error(token, f"expected an IRI or prefixed name, got {token.value!r}")

    def parse(self) -> list[tuple[str, str, _Token]]:
        """Flatten the document into (subject, predicate, object token) triples."""
        triples: list[tuple[str, str, _Token]] = []
        while True:
            token = self._peek()
            if token.kind == "eof":
                return triples
            if token.kind == "word" and token.value == "@prefix":
                self._next()
                name = self._next()
                if name.kind != "pname" or not name.value.endswith(":"):
                    raise self._error(name, "expected a prefix name ending with ':'")
                iri = self._next()
                if iri.kind != "iri":
                    raise self._error(iri, "expected an IRI in @prefix")
                self._expect_punct(".")
                self.prefixes[name.value[:-1]] = iri.value
                continue
            subject = self._resolve(self._next())
            while True:
                predicate = self._resolve(self._next())
                obj = self._next()
                if obj.kind not in ("iri", "pname", "literal", "word"):
                    raise self._error(obj, "expected an object term")
                if obj.kind == "word" and not _is_integer(obj.value):
                    raise self._error(obj, f"unexpected bareword object {obj.value!r}")
                if obj.kind == "pname":
                    obj = _Token("iri", self._resolve(obj), obj.line, obj.column)
                triples.append((subject, predicate, obj))
                sep = self._next()
                if sep.kind == "punct" and sep.value == ";":
                    continue
                if sep.kind == "punct" and sep.value == ".":
                    break
                raise self._error(sep, f"expected ';' or '.', got {sep.value!r}")


def _is_integer(text: str) -> bool:
    body = text[1:] if text[:1] in "+-" else text
    return body.isdigit()


_NS = PREFIXES[""]
_RDF_TYPE = PREFIXES["rdf"] + "type"
_RDFS_LABEL = PREFIXES["rdfs"] + "label"
_OWL_ONTOLOGY = PREFIXES["owl"] + "Ontology"
_XSD_INTEGER = PREFIXES["xsd"] + "integer"

_ENTITY_PREDICATES = {
    _RDFS_LABEL: "label",
    _NS + "hasKey": "key",
    _NS + "hasState": "state",
    _NS + "hasBase": "base",
    _NS + "hasUnit": "unit",
    _NS + "causes": "causes",
}
_LINK_PREDICATES = {
    _NS + "hasCause": "cause",
    _NS + "hasEffect": "effect",
    _NS + "hasEvidence": "evidence",
}


def import_turtle(text: str) -> KBSnapshot:
    """Parse a Turtle document produced by export_turtle back into a KB."""
    triples = _Parser(text).parse()

    by_subject: dict[str, list[tuple[str, _Token]]] = {}
    order: list[str] = []
    for subject, predicate, obj in triples:
        if subject not in by_subject:
            by_subject[subject] = []
            order.append(subject)
        by_subject[subject].append((predicate, obj))

    ontology_seen = False
    kb = KBSnapshot()
    causes_pairs: set[tuple[str, str]] = set()
    links: list[dict] = []

    for subject in order:
        props = by_subject[subject]
        types = [o for p, o in props if p == _RDF_TYPE]
        if not types:
            raise TurtleImportError(f"subject <{subject}> has no rdf:type")
        type_iri = _resolve_object_iri(types[0])
        if type_iri == _OWL_ONTOLOGY:
            ontology_seen = True
            continue
        if type_iri == _NS + "ClimateConcept":
            _read_entity(kb, subject, props, causes_pairs)
        elif type_iri == _NS + "CausalLink":
            links.append(_read_link(subject, props))
        else:
            raise TurtleImportError(f"unknown class <{type_iri}> for subject <{subject}>")

    if not ontology_seen:
        raise TurtleImportError("missing ontology header triple")

    link_pairs: set[tuple[str, str]] = set()
    for link in links:
        pair = (link["cause"], link["effect"])
        if pair in link_pairs:
            raise TurtleImportError(f"duplicate causal link {pair[0]} -> {pair[1]}")
        link_pairs.add(pair)
        for article_id, sentence_index, sentence_text in link["evidence"]:
            try:
                kb.upsert_edge(pair[0], pair[1],
                               SentenceRef(article_id, sentence_index, sentence_text))
            except IntegrityError as exc:
                raise TurtleImportError(str(exc)) from exc
    if causes_pairs != link_pairs:
        raise TurtleImportError(":causes triples and :CausalLink individuals disagree")
    kb.check_integrity()
    return kb


def _resolve_object_iri(obj: _Token) -> str:
    # object tokens reaching here were resolved to full IRIs by the parser
    return obj.value


def _local_name(subject: str, expected_kind: str) -> str:
    if not subject.startswith(_NS):
        raise TurtleImportError(f"{expected_kind} subject <{subject}> is outside the KB namespace")
    return subject[len(_NS):]


def _read_entity(kb: KBSnapshot, subject: str, props: list[tuple[str, _Token]],
                 causes_pairs: set[tuple[str, str]]) -> None:
    entity_id = _local_name(subject, "entity")
    fields: dict[str, str | None] = {"label": None, "key": None, "state": None,
                                     "base": None, "unit": None}
    associations = neutral_associations()
    assoc_seen: set[PersonalValue] = set()
    for predicate, obj in props:
        if predicate == _RDF_TYPE:
            continue
        if predicate in _ENTITY_PREDICATES:
            name = _ENTITY_PREDICATES[predicate]
            if name == "causes":
                causes_pairs.add((entity_id, _local_name(obj.value, "causes target")))
                continue
            if obj.kind != "literal":
                raise TurtleImportError(f"property {name} of {entity_id} must be a literal")
            fields[name] = obj.value
            continue
        local = predicate[len(_NS):] if predicate.startswith(_NS) else predicate
        if local in _ASSOC_VALUE:
            value = _ASSOC_VALUE[local]
            score = _integer_object(obj, f"{local} of {entity_id}")
            if score not in (-1, 0, 1):
                raise TurtleImportError(f"{local} of {entity_id} must be -1, 0 or 1, got {score}")
            associations[value] = score
            assoc_seen.add(value)
            continue
        raise TurtleImportError(f"unknown property <{predicate}> on {entity_id}")
    if fields["label"] is None:
        raise TurtleImportError(f"entity {entity_id} is missing rdfs:label")
    if fields["key"] is None:
        raise TurtleImportError(f"entity {entity_id} is missing :hasKey")
    if assoc_seen and len(assoc_seen) != len(VALUE_ORDER):
        missing = sorted(v.value for v in VALUE_ORDER if v not in assoc_seen)
        raise TurtleImportError(
            f"entity {entity_id} has a partial association map (missing {', '.join(missing)})")
    kb.add_entity(
        CanonicalEntity(
            id=entity_id,
            label=fields["label"],
            key=fields["key"],
            base=fields["base"] or "",
            state=fields["state"],
            unit=fields["unit"],
            associations=associations,
            curated=bool(assoc_seen),
            keys=[fields["key"]],
        )
    )


def _read_link(subject: str, props: list[tuple[str, _Token]]) -> dict:
    link_id = _local_name(subject, "link")
    cause = effect = None
    evidence: list[tuple[str, int, str]] = []
    for predicate, obj in props:
        if predicate == _RDF_TYPE:
            continue
        if predicate not in _LINK_PREDICATES:
            raise TurtleImportError(f"unknown property <{predicate}> on link {link_id}")
        name = _LINK_PREDICATES[predicate]
        if name == "cause":
            cause = _local_name(obj.value, "link cause")
        elif name == "effect":
            effect = _local_name(obj.value, "link effect")
        else:
            if obj.kind != "literal":
                raise TurtleImportError(f"evidence on link {link_id} must be a literal")
            parts = obj.value.split("|", 2)
            if len(parts) != 3 or not _is_integer(parts[1]):
                raise TurtleImportError(
                    f"evidence on link {link_id} must look like 'article|index|text'")
            evidence.append((parts[0], int(parts[1]), parts[2]))
    if cause is None or effect is None:
        raise TurtleImportError(f"link {link_id} is missing :hasCause or :hasEffect")
    if not evidence:
        raise TurtleImportError(f"link {link_id} has no evidence")
    return {"cause": cause, "effect": effect, "evidence": evidence}


def _integer_object(obj: _Token, context: str) -> int:
    if obj.kind == "literal":
        if obj.datatype is not None and not obj.datatype.endswith("integer"):
            raise TurtleImportError(f"{context} must be an xsd:integer literal")
        if not _is_integer(obj.value):
            raise TurtleImportError(f"{context} is not an integer: {obj.value!r}")
        return int(obj.value)
    if obj.kind == "word" and _is_integer(obj.value):
        return int(obj.value)
    raise TurtleImportError(f"{context} must be an integer")


# --- semantic equality --------------------------------------------------------


def kb_equal(a: KBSnapshot, b: KBSnapshot) -> bool:
    """Graph-level equality: same entities, edges, associations, evidence.

    Member bookkeeping and build metadata are not part of the exchanged
    graph and are ignored; evidence is compared as a multiset per edge.
    """

    def entity_facet(e: CanonicalEntity):
        return (e.id, e.label, e.key, e.state, e.base or "", e.unit, e.curated,
                tuple(e.associations[v] for v in VALUE_ORDER))

    def edge_facet(edge: CausalEdge):
        evidence = sorted((r.article_id, r.sentence_index, r.text) for r in edge.evidence)
        return (edge.cause_id, edge.effect_id, tuple(evidence))

    left = sorted(entity_facet(e) for e in a.entities.values())
    right = sorted(entity_facet(e) for e in b.entities.values())
    if left != right:
        return False
    return sorted(edge_facet(e) for e in a.edges.values()) == \
        sorted(edge_facet(e) for e in b.edges.values())
