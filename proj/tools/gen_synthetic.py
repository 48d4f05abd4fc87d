#!/usr/bin/env python3
"""Regenerates the bundled synthetic stance corpus under data/synthetic/.

Every tweet carries exactly one stance marker word, so the corpus is
separable by construction. Sentiment follows stance (FAVOR -> POSITIVE,
AGAINST -> NEGATIVE, NONE -> OTHER). Output is deterministic.
"""
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "synthetic"

TARGETS = ["Atheism", "Feminist Movement"]
MARKERS = {
    "FAVOR": [("support", "VBP"), ("great", "JJ"), ("hope", "NN")],
    "AGAINST": [("oppose", "VBP"), ("terrible", "JJ"), ("shame", "NN")],
    "NONE": [("weather", "NN"), ("lunch", "NN"), ("walk", "VB")],
}
SENTIMENT = {"FAVOR": "POSITIVE", "AGAINST": "NEGATIVE", "NONE": "OTHER"}
PRONOUNS = [("we", "PRP"), ("they", "PRP"), ("i", "PRP")]
VERBS = [("see", "VBP"), ("know", "VBP"), ("think", "VBP")]
FILLERS = [(w, "NN") for w in ["city", "car", "book", "phone", "music", "game", "friend", "school"]]
EXTRA = [("semst", "NN"), ("user", "NN")]
PER_TARGET = 100
TRAIN_SHARE = 70


def make_tweet(rng, stance):
    pron = rng.choice(PRONOUNS)
    verb = rng.choice(VERBS)
    marker = rng.choice(MARKERS[stance])
    filler = rng.choice(FILLERS)
    words = [pron, verb, marker, filler]
    text_words = [w.capitalize() if i == 0 else w for i, (w, _) in enumerate(words)]
    prefix = "@user " if rng.random() < 0.2 else ""
    suffix = " http://t.co/x1" if rng.random() < 0.2 else ""
    text = prefix + " ".join(text_words) + "! #SemST" + suffix
    tokens = ([("user", "NN")] if prefix else []) + words + [("semst", "NN")]
    return text, tokens, marker


def conll_for(tokens, marker, split):
    """Marker is the root; everything else attaches to it. With split=True
    the filler and the hashtag form a second sentence."""
    labels = {"PRP": "nsubj", "VBP": "aux", "NN": "dobj"}
    sentences = []
    if split:
        cut = next(i for i, t in enumerate(tokens) if t == marker) + 1
        groups = [tokens[:cut], tokens[cut:]]
    else:
        groups = [tokens]
    for group in groups:
        root = next((i for i, t in enumerate(group) if t == marker), 0)
        rows = []
        for i, (w, tag) in enumerate(group):
            if i == root:
                head, rel = 0, "root"
            else:
                head, rel = root + 1, labels.get(tag, "dep")
            rows.append(f"{i + 1}\t{w}\t{w}\t{tag}\t{tag}\t_\t{head}\t{rel}\t_\t_")
        sentences.append("\n".join(rows))
    return sentences


def main():
    rng = random.Random(20161031)
    OUT.mkdir(parents=True, exist_ok=True)
    header = "ID\tTarget\tTweet\tStance\tSentiment\n"
    splits = {"train": [], "test": []}
    tweet_id = 10000
    for target in TARGETS:
        stances = [["FAVOR", "AGAINST", "NONE"][i % 3] for i in range(PER_TARGET)]
        rng.shuffle(stances)
        for i, stance in enumerate(stances):
            text, tokens, marker = make_tweet(rng, stance)
            split = rng.random() < 0.1
            row = (str(tweet_id), target, text, stance, SENTIMENT[stance], tokens, marker, split)
            splits["train" if i < TRAIN_SHARE else "test"].append(row)
            tweet_id += 1

    for name, rows in splits.items():
        with open(OUT / f"{name}.tsv", "w") as f:
            f.write(header)
            for tid, target, text, stance, sentiment, *_ in rows:
                f.write(f"{tid}\t{target}\t{text}\t{stance}\t{sentiment}\n")
        conll, index = [], []
        for *_, tokens, marker, split in rows:
            sents = conll_for(tokens, marker, split)
            conll.extend(sents)
            index.append(str(len(sents)))
        (OUT / f"{name}.conll").write_text("\n\n".join(conll) + "\n\n")
        (OUT / f"{name}.conll.idx").write_text("\n".join(index) + "\n")

    # Tagger training sample: unambiguous lexicon covering the vocabulary.
    vocab = PRONOUNS + VERBS + FILLERS + EXTRA + [m for ms in MARKERS.values() for m in ms]
    lines = []
    for _ in range(120):
        stance = rng.choice(list(MARKERS))
        _, tokens, _ = make_tweet(rng, stance)
        lines.append("\n".join(f"{w}\t{t}" for w, t in tokens))
    for w, t in vocab:
        lines.append(f"{w}\t{t}")
    (OUT / "tagger_train.tt").write_text("%% synthetic tagged sample\n" + "\n\n".join(lines) + "\n")

    (OUT / "mpqa.tff").write_text(
        "type=strongsubj len=1 word1=support pos1=verb stemmed1=n priorpolarity=positive\n"
        "type=strongsubj len=1 word1=great pos1=adj stemmed1=n priorpolarity=positive\n"
        "type=weaksubj len=1 word1=hope pos1=noun stemmed1=n priorpolarity=positive\n"
        "type=strongsubj len=1 word1=oppose pos1=verb stemmed1=y priorpolarity=negative\n"
        "type=strongsubj len=1 word1=terrible pos1=adj stemmed1=n priorpolarity=negative\n"
        "type=weaksubj len=1 word1=shame pos1=noun stemmed1=n priorpolarity=negative\n"
        "type=weaksubj len=1 word1=know pos1=verb stemmed1=y priorpolarity=neutral\n"
        "type=weaksubj len=1 word1=abandoned pos1=adj stemmed1=n priorpolarity=negative\n"
    )
    macros = OUT / "arguing" / "macros"
    patterns = OUT / "arguing" / "patterns"
    macros.mkdir(parents=True, exist_ok=True)
    patterns.mkdir(parents=True, exist_ok=True)
    (macros / "verbs.tff").write_text("#class=\"macros\"\n@STANCEVERB={support, oppose}\n")
    (macros / "judgements.tff").write_text("#class=\"macros\"\n@JUDGE=(great|terrible)\n")
    (patterns / "necessity.tff").write_text("#class=\"necessity\"\n@STANCEVERB(s|ed)?\nmust( not)?\n")
    (patterns / "assessments.tff").write_text("#class=\"assessments\"\n@JUDGE\n")
    (patterns / "emphasis.tff").write_text("#class=\"emphasis\"\n(hope|shame)\n")

if __name__ == "__main__":
    main()
