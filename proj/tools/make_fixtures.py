#!/usr/bin/env python3
"""Regenerates the shipped fixture data under data/.

    python3 tools/make_fixtures.py [--root DIR]

Writes data/people.txt, data/lexicons/*.tsv and the 60-document synthetic
corpus (data/synthetic/corpus.jsonl). Output is deterministic.
"""

import argparse
import json
import random
from pathlib import Path

# ---------------------------------------------------------------------------
# word lists

FEMALE_RELS = ["sister", "mother", "wife", "aunt", "daughter", "girlfriend", "grandmother", "niece"]
MALE_RELS = ["brother", "father", "husband", "uncle", "son", "boyfriend", "grandfather", "nephew"]
NEUTRAL_RELS = ["roommate", "friend", "boss", "coworker", "neighbor", "cousin", "partner", "landlord"]

HARM_VERBS = ["yell", "insult", "ignore", "betray", "blame", "mock", "threaten", "exclude", "humiliate",
              "scold", "abandon", "criticize"]
KIND_VERBS = ["help", "support", "thank", "invite", "hug", "comfort", "forgive", "praise", "protect",
              "visit", "reassure", "defend"]
PAST = {"yell": "yelled at", "insult": "insulted", "ignore": "ignored", "betray": "betrayed", "blame": "blamed",
        "mock": "mocked", "threaten": "threatened", "exclude": "excluded", "humiliate": "humiliated",
        "scold": "scolded", "abandon": "abandoned", "criticize": "criticized", "help": "helped",
        "support": "supported", "thank": "thanked", "invite": "invited", "hug": "hugged", "comfort": "comforted",
        "forgive": "forgave", "praise": "praised", "protect": "protected", "visit": "visited",
        "reassure": "reassured", "defend": "defended", "give": "gave", "call": "called", "tell": "told",
        "love": "loved"}

NEG_ADJS = ["rude", "selfish", "mean", "cruel", "terrible", "petty", "entitled", "nasty", "horrible", "toxic",
            "lazy", "dishonest"]
POS_ADJS = ["kind", "nice", "patient", "generous", "honest", "calm", "polite", "helpful", "sweet", "supportive",
            "fair", "good"]

THEMES = {
    "wedding": ["wedding", "dress", "venue", "guest", "cake", "ring", "bridesmaid", "ceremony"],
    "money": ["money", "rent", "loan", "bill", "paycheck", "debt", "budget", "account"],
    "pets": ["dog", "cat", "vet", "leash", "puppy", "kennel", "walk", "food"],
    "house": ["apartment", "kitchen", "dish", "lease", "couch", "noise", "bathroom", "chore"],
}

HEDGES = ["maybe", "perhaps", "probably", "possibly", "somewhat", "apparently", "seemingly", "likely", "guess",
          "suppose", "sort", "kind", "think", "believe", "seem", "appear", "roughly", "arguably", "presumably",
          "allegedly"]
MODALS = ["can", "could", "may", "might", "must", "shall", "should", "will", "would", "ought", "need",
          "cannot", "wont", "dare"]

PEOPLE = sorted(set(FEMALE_RELS + MALE_RELS + NEUTRAL_RELS + """
    man woman boy girl child kid baby toddler teen teenager adult person people guy lady gentleman mom dad mum
    mommy daddy parent stepmother stepfather stepmom stepdad stepsister stepbrother stepson stepdaughter
    grandma grandpa granny grandparent grandson granddaughter grandchild sibling twin spouse fiance fiancee
    ex bride groom bridesmaid groomsman inlaw mil fil sil bil relative family kin godmother godfather
    godson goddaughter colleague manager supervisor employee employer intern assistant teacher professor student
    classmate tutor principal coach doctor nurse therapist dentist lawyer officer cop neighbour tenant owner host
    guest stranger customer client waiter waitress server cashier driver bartender chef babysitter nanny
    housemate flatmate bestie buddy pal mate acquaintance girlfriend boyfriend date crush stepkid toddler
""".split()))

# ---------------------------------------------------------------------------
# lexicons


def jitter(rng, base, spread, lo, hi):
    return round(min(hi, max(lo, base + rng.uniform(-spread, spread))), 3)


def write_tsv(path, header, rows):
    lines = ["\t".join(header)] + ["\t".join(str(c) for c in r) for r in rows]
    path.write_text("\n".join(lines) + "\n")


def make_lexicons(root):
    rng = random.Random(2021)
    d = root / "lexicons"
    d.mkdir(parents=True, exist_ok=True)
    neutral_verbs = ["give", "call", "tell", "love", "say", "ask", "want", "go", "take", "leave", "meet", "talk",
                     "be", "have", "make", "see", "know", "feel", "pay", "move", "cook", "clean", "buy", "plan"]

    cf_dims = ["perspective_agent", "perspective_theme", "value_agent", "value_theme", "effect_agent",
               "effect_theme", "mental_agent", "mental_theme"]
    harm_cf = [-0.6, 0.3, -0.4, 0.5, 0.1, -0.7, -0.2, -0.6]
    kind_cf = [0.6, 0.4, 0.5, 0.4, 0.2, 0.7, 0.4, 0.6]
    rows = [["betray", -0.67, 0.26, 0.47, 0.87, 0.067, -0.93, -0.03, -0.67]]
    for v in HARM_VERBS:
        if v != "betray":
            rows.append([v] + [jitter(rng, b, 0.15, -1, 1) for b in harm_cf])
    for v in KIND_VERBS:
        rows.append([v] + [jitter(rng, b, 0.15, -1, 1) for b in kind_cf])
    for v in neutral_verbs:
        rows.append([v] + [jitter(rng, 0.0, 0.3, -1, 1) for _ in cf_dims])
    write_tsv(d / "connotation_frames.tsv", ["lemma"] + cf_dims, rows)

    rows = []
    for v in HARM_VERBS:
        rows.append([v, jitter(rng, 0.6, 0.3, -1, 1), jitter(rng, 0.7, 0.3, -1, 1)])
    for v in KIND_VERBS:
        rows.append([v, jitter(rng, -0.2, 0.3, -1, 1), jitter(rng, 0.4, 0.3, -1, 1)])
    for v in neutral_verbs:
        rows.append([v, round(rng.choice([-1, 0, 1]) * 1.0, 1), round(rng.choice([-1, 0, 1]) * 1.0, 1)])
    write_tsv(d / "power_agency.tsv", ["lemma", "power", "agency"], rows)

    moral = ["care", "harm", "fairness", "cheating", "loyalty", "betrayal", "authority", "subversion", "sanctity",
             "degradation"]
    harm_m = [-0.4, 0.7, -0.3, 0.4, -0.3, 0.5, -0.1, 0.3, -0.2, 0.3]
    kind_m = [0.7, -0.4, 0.4, -0.3, 0.5, -0.3, 0.2, -0.1, 0.3, -0.2]
    rows = []
    for w in HARM_VERBS + NEG_ADJS:
        rows.append([w] + [jitter(rng, b, 0.2, -1, 1) for b in harm_m])
    for w in KIND_VERBS + POS_ADJS:
        rows.append([w] + [jitter(rng, b, 0.2, -1, 1) for b in kind_m])
    for w in neutral_verbs[:10]:
        rows.append([w] + [jitter(rng, 0.0, 0.2, -1, 1) for _ in moral])
    write_tsv(d / "emfd.tsv", ["lemma"] + moral, rows)

    rows = []
    for w in HARM_VERBS + NEG_ADJS:
        rows.append([w, jitter(rng, 0.15, 0.1, 0, 1), jitter(rng, 0.75, 0.15, 0, 1), jitter(rng, 0.55, 0.2, 0, 1)])
    for w in KIND_VERBS + POS_ADJS:
        rows.append([w, jitter(rng, 0.85, 0.1, 0, 1), jitter(rng, 0.4, 0.15, 0, 1), jitter(rng, 0.6, 0.2, 0, 1)])
    for w in neutral_verbs:
        rows.append([w, jitter(rng, 0.5, 0.2, 0, 1), jitter(rng, 0.4, 0.2, 0, 1), jitter(rng, 0.5, 0.2, 0, 1)])
    write_tsv(d / "vad.tsv", ["lemma", "valence", "arousal", "dominance"], rows)

    emotions = ["joy", "sadness", "anger", "fear", "trust", "disgust", "surprise", "anticipation"]
    rows = [["love", 1, 0, 0, 0, 1, 0, 0, 1]]
    for w in HARM_VERBS + NEG_ADJS:
        rows.append([w, 0, rng.choice([0, 1]), 1, rng.choice([0, 1]), 0, rng.choice([0, 1]), 0, 0])
    for w in KIND_VERBS + POS_ADJS:
        rows.append([w, 1, 0, 0, 0, rng.choice([0, 1]), 0, rng.choice([0, 1]), rng.choice([0, 1])])
    for w in ["cry", "scream", "surprise", "hope", "worry", "hate"]:
        rows.append([w] + [rng.choice([0, 1]) for _ in emotions])
    write_tsv(d / "emotion.tsv", ["lemma"] + emotions, rows)

    rows = [["terrible", "strongsubj"]]
    for w in NEG_ADJS + POS_ADJS:
        if w != "terrible":
            rows.append([w, rng.choice(["strongsubj", "weaksubj"])])
    for w in HARM_VERBS + KIND_VERBS:
        rows.append([w, rng.choice(["weaksubj", "neutral"])])
    for w in ["really", "totally", "awful", "amazing", "honestly", "clearly", "obviously", "literally"]:
        rows.append([w, "strongsubj"])
    write_tsv(d / "subjectivity.tsv", ["lemma", "subjectivity"], rows)

    write_tsv(d / "hedge.tsv", ["lemma", "score"], [[w, 1] for w in HEDGES] +
              [["might", 0.8], ["could", 0.6], ["possible", 0.7], ["unclear", 0.6], ["somehow", 0.5],
               ["almost", 0.4], ["mostly", 0.4], ["usually", 0.3], ["often", 0.3], ["sometimes", 0.4],
               ["generally", 0.4], ["fairly", 0.5], ["quite", 0.3], ["rather", 0.4], ["around", 0.3],
               ["about", 0.2], ["approximately", 0.5], ["suggest", 0.6], ["assume", 0.6], ["doubt", 0.7],
               ["unsure", 0.8], ["wonder", 0.6], ["feel", 0.3], ["imagine", 0.5], ["estimate", 0.5],
               ["tend", 0.5], ["indicate", 0.4], ["unlikely", 0.6], ["partly", 0.5], ["kinda", 0.7]])
    write_tsv(d / "modal.tsv", ["lemma", "score"], [[w, 1] for w in MODALS] +
              [["able", 0.5], ["allowed", 0.5], ["supposed", 0.6], ["required", 0.6], ["necessary", 0.6],
               ["possible", 0.4], ["permitted", 0.5], ["obliged", 0.6], ["going", 0.3], ["gonna", 0.4],
               ["gotta", 0.6], ["wanna", 0.3], ["hafta", 0.6], ["maybe", 0.3], ["perhaps", 0.3],
               ["probably", 0.4], ["certainly", 0.5], ["definitely", 0.5], ["surely", 0.5], ["likely", 0.4],
               ["unable", 0.5], ["mustnt", 1], ["shouldnt", 1], ["couldnt", 1], ["wouldnt", 1], ["cant", 1],
               ["mightnt", 1], ["neednt", 1], ["shant", 1], ["oughtnt", 1], ["willing", 0.3], ["intend", 0.3],
               ["plan", 0.2], ["expect", 0.3], ["want", 0.2], ["wish", 0.3]])

    rows = [["good", 1.9], ["bad", -2.5], ["love", 3.2], ["hate", -2.7]]
    for w in NEG_ADJS:
        rows.append([w, round(rng.uniform(-3.2, -1.2), 1)])
    for w in POS_ADJS:
        if w != "good":
            rows.append([w, round(rng.uniform(1.2, 3.0), 1)])
    for w in HARM_VERBS:
        rows.append([w, round(rng.uniform(-2.6, -1.0), 1)])
    for w in KIND_VERBS:
        rows.append([w, round(rng.uniform(1.0, 2.6), 1)])
    for w, v in [("happy", 2.7), ("sad", -2.1), ("angry", -2.3), ("upset", -1.6), ("great", 3.1),
                 ("awful", -2.0), ("sorry", -0.3), ("fine", 0.8)]:
        rows.append([w, v])
    write_tsv(d / "sentiment.tsv", ["lemma", "valence"], rows)


# ---------------------------------------------------------------------------
# synthetic corpus


def tok(text, lemma, pos, head, deprel):
    return {"text": text, "lemma": lemma, "pos": pos, "head": head, "deprel": deprel}


def pronoun(gender, case):
    if gender == "f":
        return {"subj": "She", "obj": "her"}[case]
    return {"subj": "He", "obj": "him"}[case]


class DocBuilder:
    def __init__(self):
        self.sentences = []
        self.srl = []
        self.chain = []  # antagonist mentions

    def add(self, tokens):
        self.sentences.append({"tokens": tokens})
        return len(self.sentences) - 1

    def svo(self, subj, verb, obj, ant_gender, rel):
        """subj/obj in {"i", "me", "ant", "rel"}; "rel" renders as "My <rel>"."""
        toks, spans = [], {}
        if subj == "i":
            toks.append(tok("I", "i", "PRON", None, "nsubj"))
            spans["subj"] = (0, 1)
        elif subj == "rel":
            toks.append(tok("My", "my", "PRON", 1, "poss"))
            toks.append(tok(rel, rel, "NOUN", None, "nsubj"))
            spans["subj"] = (0, 2)
        else:
            p = pronoun(ant_gender, "subj")
            toks.append(tok(p, p.lower(), "PRON", None, "nsubj"))
            spans["subj"] = (0, 1)
        v = len(toks)
        words = PAST[verb].split()
        toks.append(tok(words[0], verb, "VERB", -1, "ROOT"))
        for t in toks[:v]:
            if t["head"] is None:
                t["head"] = v
        if len(words) > 1:
            toks.append(tok(words[1], words[1], "ADP", v, "prt"))
        o = len(toks)
        if obj == "me":
            toks.append(tok("me", "me", "PRON", v, "dobj"))
            spans["obj"] = (o, o + 1)
        elif obj == "rel":
            toks.append(tok("my", "my", "PRON", o + 1, "poss"))
            toks.append(tok(rel, rel, "NOUN", v, "dobj"))
            spans["obj"] = (o, o + 2)
        else:
            p = pronoun(ant_gender, "obj")
            toks.append(tok(p, p, "PRON", v, "dobj"))
            spans["obj"] = (o, o + 1)
        toks.append(tok(".", ".", "PUNCT", v, "punct"))
        s = self.add(toks)
        if subj in ("ant", "rel"):
            self.chain.append({"sent": s, "start": spans["subj"][0], "end": spans["subj"][1]})
        if obj in ("ant", "rel"):
            self.chain.append({"sent": s, "start": spans["obj"][0], "end": spans["obj"][1]})
        self.srl.append({"sent": s, "pred": {"start": v, "end": v + 1},
                         "args": {"ARG0": [{"start": spans["subj"][0], "end": spans["subj"][1]}],
                                  "ARG1": [{"start": spans["obj"][0], "end": spans["obj"][1]}]}})

    def acomp(self, who, adj, ant_gender):
        if who == "i":
            first = tok("I", "i", "PRON", 1, "nsubj")
        else:
            p = pronoun(ant_gender, "subj")
            first = tok(p, p.lower(), "PRON", 1, "nsubj")
        s = self.add([first, tok("was", "be", "VERB", -1, "ROOT"), tok(adj, adj, "ADJ", 1, "acomp"),
                      tok(".", ".", "PUNCT", 1, "punct")])
        if who != "i":
            self.chain.append({"sent": s, "start": 0, "end": 1})

    def amod(self, adj, rel, verb):
        toks = [tok("My", "my", "PRON", 2, "poss"), tok(adj, adj, "ADJ", 2, "amod"),
                tok(rel, rel, "NOUN", 3, "nsubj")]
        words = PAST[verb].split()
        toks.append(tok(words[0], verb, "VERB", -1, "ROOT"))
        if len(words) > 1:
            toks.append(tok(words[1], words[1], "ADP", 3, "prt"))
        o = len(toks)
        toks.append(tok("me", "me", "PRON", 3, "dobj"))
        toks.append(tok(".", ".", "PUNCT", 3, "punct"))
        s = self.add(toks)
        self.chain.append({"sent": s, "start": 0, "end": 3})
        self.srl.append({"sent": s, "pred": {"start": 3, "end": 4},
                         "args": {"ARG0": [{"start": 0, "end": 3}], "ARG1": [{"start": o, "end": o + 1}]}})

    def topic(self, a, b, hedge):
        toks = [tok("We", "we", "PRON", 1, "nsubj"), tok("talked", "talk", "VERB", -1, "ROOT"),
                tok("about", "about", "ADP", 1, "prep"), tok("the", "the", "DET", 4, "det"),
                tok(a, a, "NOUN", 2, "pobj"), tok("and", "and", "CCONJ", 4, "cc"), tok("the", "the", "DET", 7, "det"),
                tok(b, b, "NOUN", 4, "conj"), tok(".", ".", "PUNCT", 1, "punct")]
        if hedge:
            toks.insert(0, tok("Maybe", "maybe", "ADV", 2, "advmod"))
            for t in toks[1:]:
                if t["head"] >= 0:
                    t["head"] += 1
        self.add(toks)


def body_text(sentences):
    out = []
    for s in sentences:
        words = [t["text"] for t in s["tokens"]]
        out.append(" ".join(words[:-1]) + words[-1])
    return " ".join(out)


def make_doc(rng, i, label):
    g = rng.choice(["f", "m"])
    rel = rng.choice(FEMALE_RELS if g == "f" else MALE_RELS) if rng.random() < 0.7 else rng.choice(NEUTRAL_RELS)
    if rel in FEMALE_RELS:
        g = "f"
    elif rel in MALE_RELS:
        g = "m"
    theme = rng.choice(sorted(THEMES))
    b = DocBuilder()
    signal = 0.8

    def verb_for(author_is_agent):
        harmful = (label == 1) == author_is_agent
        if rng.random() > signal:
            harmful = not harmful
        return rng.choice(HARM_VERBS if harmful else KIND_VERBS)

    def adj_for(about_author):
        negative = (label == 1) == about_author
        if rng.random() > signal:
            negative = not negative
        return rng.choice(NEG_ADJS if negative else POS_ADJS)

    b.svo("rel", verb_for(False), "me", g, rel)
    for _ in range(11):
        if rng.random() < 0.5:
            b.svo("i", verb_for(True), rng.choice(["ant", "rel"]), g, rel)
        else:
            b.svo(rng.choice(["ant", "ant", "rel"]), verb_for(False), "me", g, rel)
    for _ in range(10):
        about_author = rng.random() < 0.5
        b.acomp("i" if about_author else "ant", adj_for(about_author), g)
    for _ in range(2):
        b.amod(adj_for(False), rel, verb_for(False))
    words = THEMES[theme]
    for _ in range(4):
        a, c = rng.sample(words, 2)
        b.topic(a, c, rng.random() < 0.3)

    order = list(range(1, len(b.sentences)))
    rng.shuffle(order)
    order = [0] + order
    remap = {old: new for new, old in enumerate(order)}
    sentences = [b.sentences[k] for k in order]
    chain = sorted(({**m, "sent": remap[m["sent"]]} for m in b.chain), key=lambda m: (m["sent"], m["start"]))
    srl = sorted(({**f, "sent": remap[f["sent"]]} for f in b.srl), key=lambda f: f["sent"])

    author_g = rng.choice(["F", "M"])
    author_age = rng.randint(16, 54)
    other_age = rng.randint(16, 54)
    title = f"AITA for arguing with my {rel} ({other_age}{g.upper()}) about the {words[0]}? I ({author_age}{author_g})"
    return {
        "id": f"syn{i:03d}",
        "title": title,
        "body": body_text(sentences),
        "flair": "YTA" if label == 1 else "NTA",
        "comment_count": rng.randint(50, 400),
        "sentences": sentences,
        "coref": [chain] if len(chain) >= 2 else [],
        "srl": srl,
    }


def make_corpus(root):
    rng = random.Random(60)
    labels = [1] * 30 + [0] * 30
    rng.shuffle(labels)
    out = root / "synthetic"
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "corpus.jsonl", "w") as f:
        for i, label in enumerate(labels):
            f.write(json.dumps(make_doc(rng, i, label), separators=(",", ":")) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    root = Path(args.root)
    root.mkdir(parents=True, exist_ok=True)
    (root / "people.txt").write_text("# people nouns (lowercase lemmas, one per line)\n" + "\n".join(PEOPLE) + "\n")
    make_lexicons(root)
    make_corpus(root)


if __name__ == "__main__":
    main()
