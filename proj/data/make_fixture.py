#!/usr/bin/env python3
"""Regenerates the synthetic fixture corpus and the mention gold set.

Outputs (all deterministic):
  fixture/xml/<paper_id>.xml   TEI-style sources
  fixture/papers.jsonl         the same documents as plain text
  fixture/figures.jsonl        captions; mean length is exactly 26.8 tokens
  fixture/ocr.jsonl            OCR boxes, deliberately listed out of order
  mentions_gold.tsv            300 labelled sentences for the detector
"""

import json
import os
import random
import re
from xml.sax.saxutils import escape

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE = os.path.join(HERE, "fixture")

PAPERS = 50
FIGURES_PER_PAPER = 2
MEAN_CAPTION_TOKENS = 26.8
LONG_CAPTIONS = 40  # captions with >= 30 tokens; a strict minority of 100

TOKEN = re.compile(r"[A-Za-z0-9\x80-\U0010ffff]+|[^\sA-Za-z0-9\x80-\U0010ffff]")


def token_count(text):
    return len(TOKEN.findall(text))


TOPICS = [
    ("graph neural networks", "node classification", "message passing"),
    ("speech recognition", "word error rate", "acoustic model"),
    ("image segmentation", "mean IoU", "decoder"),
    ("reinforcement learning", "episode return", "policy"),
    ("machine translation", "BLEU", "attention"),
    ("protein folding", "contact map", "structure module"),
    ("traffic forecasting", "mean absolute error", "temporal encoder"),
    ("recommender systems", "hit rate", "embedding table"),
    ("climate modeling", "temperature anomaly", "ensemble"),
    ("robot grasping", "success rate", "gripper controller"),
]

SUBJECTS = ["The loss", "Accuracy", "The validation error", "Throughput",
            "The learned representation", "Training time", "Recall",
            "The gradient norm", "Memory usage", "The calibration error"]
VERBS = ["decreases steadily", "improves sharply", "saturates quickly",
         "fluctuates", "grows linearly", "remains stable",
         "drops after warm-up", "converges"]
CONDITIONS = ["as the batch size grows", "with deeper encoders",
              "under label noise", "when dropout is disabled",
              "on the held-out split", "for longer sequences",
              "after 20 epochs", "with data augmentation"]

FILLERS = [
    "We follow the protocol of Smith et al. and report averages over five runs.",
    "All models are trained with Adam, e.g. with a learning rate of 0.001.",
    "The remaining hyperparameters are listed in the appendix.",
    "This setting mirrors prior work, i.e. the standard benchmark split.",
    "Our implementation builds on a public code base.",
    "We observe no significant difference at p = 0.05 in this regime.",
    "Each experiment takes roughly 3.5 hours on a single GPU.",
    "The baseline uses the configuration described in Sec. 4 of the original paper.",
    "Results on the remaining datasets show the same trend.",
    "We discuss limitations of this analysis in the conclusion.",
    "Data were collected between 2019 and 2021 from public sources.",
    "Error bars denote one standard deviation.",
]

CAPTION_WORDS = ["curves", "of", "training", "and", "validation", "loss",
                 "for", "the", "proposed", "model", "across", "five", "seeds",
                 "shaded", "regions", "show", "variance", "compared", "with",
                 "baseline", "methods", "on", "three", "benchmarks", "where",
                 "higher", "is", "better", "results", "averaged", "over",
                 "runs", "dashed", "lines", "mark", "reference", "values"]

OCR_WORDS = ["epoch", "loss", "accuracy", "train", "val", "0.5", "1.0",
             "baseline", "ours", "step", "F1", "error", "time", "(s)"]


def caption_lengths(rng):
    """100 lengths, 40 of them >= 30, summing to exactly 26.8 * 100."""
    total = round(MEAN_CAPTION_TOKENS * PAPERS * FIGURES_PER_PAPER)
    long = [rng.randint(30, 40) for _ in range(LONG_CAPTIONS)]
    short_n = PAPERS * FIGURES_PER_PAPER - LONG_CAPTIONS
    remaining = total - sum(long)
    short = [remaining // short_n] * short_n
    for i in range(remaining - sum(short)):
        short[i] += 1
    # Spread the short lengths without changing their sum or leaving 8..29.
    for i in range(0, short_n - 1, 2):
        d = rng.randint(0, 6)
        short[i] -= d
        short[i + 1] += d
    assert all(8 <= s <= 29 for s in short), short
    lengths = long + short
    rng.shuffle(lengths)
    assert sum(lengths) == total
    return lengths


def make_caption(rng, label, length):
    """A caption of exactly `length` length tokens."""
    head = f"Figure {label}:"
    words = []
    while token_count(" ".join([head] + words) + ".") < length:
        words.append(rng.choice(CAPTION_WORDS))
    text = " ".join([head] + words) + "."
    while token_count(text) > length:
        words.pop()
        text = " ".join([head] + words) + "."
    assert token_count(text) == length, (text, length)
    return text


def mention_sentence(rng, label, topic):
    subject = rng.choice(SUBJECTS)
    verb = rng.choice(VERBS)
    cond = rng.choice(CONDITIONS)
    forms = [
        f"As shown in Figure {label}, {subject.lower()} {verb} {cond}.",
        f"Fig. {label} shows that {subject.lower()} {verb} {cond}.",
        f"{subject} {verb} {cond} (see Figure {label}).",
        f"We plot {topic[1]} against model size in Fig. {label}({'abc'[label % 3]}).",
        f"Figure {label} compares the {topic[2]} with two baselines.",
    ]
    return rng.choice(forms)


def plain_sentence(rng, topic):
    forms = [
        f"{rng.choice(SUBJECTS)} {rng.choice(VERBS)} {rng.choice(CONDITIONS)}.",
        f"We study {topic[0]} with a focus on {topic[1]}.",
        f"The {topic[2]} is shared across all tasks.",
        rng.choice(FILLERS),
    ]
    return rng.choice(forms)


def build_papers(rng):
    lengths = caption_lengths(rng)
    papers, figures, ocr = [], [], []
    for n in range(PAPERS):
        paper_id = f"paper{n + 1:03d}"
        topic = TOPICS[n % len(TOPICS)]
        paragraphs = []  # lists of (plain sentence, xml sentence)
        for _ in range(rng.randint(4, 6)):
            paragraphs.append([None] * rng.randint(2, 6))
        # Figure 1 is always mentioned; figure 2 is mentioned in most papers,
        # sometimes twice, and never in every tenth paper.
        mentions = {1: 1 + (n % 3 == 0)}
        if n % 10 != 9:
            mentions[2] = 1 + (n % 4 == 1)
        slots = [(p, s) for p, para in enumerate(paragraphs)
                 for s in range(len(para))]
        rng.shuffle(slots)
        for label, count in mentions.items():
            for _ in range(count):
                p, s = slots.pop()
                sentence = mention_sentence(rng, label, topic)
                paragraphs[p][s] = (sentence, sentence.replace(
                    f"Figure {label}", f'<ref type="figure">Figure {label}</ref>'))
        for para in paragraphs:
            for s in range(len(para)):
                if para[s] is None:
                    sentence = plain_sentence(rng, topic)
                    para[s] = (sentence, escape(sentence))
        # One formula per paper, rendered as MATH in plain text.
        p = rng.randrange(len(paragraphs))
        plain, xml = paragraphs[p][-1]
        paragraphs[p][-1] = (plain[:-1] + " with MATH.",
                             xml[:-1] + " with <formula>x^2 + y</formula>.")

        title = f"A Study of {topic[0].title()} ({n + 1})"
        abstract = (f"We investigate {topic[0]} and report {topic[1]} "
                    f"for a new {topic[2]}.")
        papers.append({
            "paper_id": paper_id, "title": title, "abstract": abstract,
            "paragraphs": [
                {"paragraph_id": f"p{i + 1}", "text": " ".join(s[0] for s in para)}
                for i, para in enumerate(paragraphs)],
        })
        write_xml(paper_id, title, abstract, paragraphs)

        for label in (1, 2):
            figure_id = f"{paper_id}-f{label}"
            figures.append({
                "figure_id": figure_id, "paper_id": paper_id,
                "figure_label": label,
                "caption_text": make_caption(rng, label, lengths.pop()),
            })
            if (n + label) % 5 != 0:
                boxes = []
                for row in range(rng.randint(1, 3)):
                    for col in range(rng.randint(1, 4)):
                        boxes.append({
                            "text": rng.choice(OCR_WORDS),
                            "x": 10 + 60 * col + rng.randint(0, 5),
                            "y": 20 + 40 * row + rng.randint(0, 3),
                            "w": 40, "h": 12,
                        })
                rng.shuffle(boxes)
                ocr.append({"figure_id": figure_id, "boxes": boxes})
    return papers, figures, ocr


def write_xml(paper_id, title, abstract, paragraphs):
    body = []
    for i, para in enumerate(paragraphs):
        inner = "\n        ".join(s[1] for s in para)
        body.append(f"      <div>\n        <head>Section {i + 1}</head>\n"
                    f"        <p>\n        {inner}\n        </p>\n      </div>")
    xml = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<TEI xmlns="http://www.tei-c.org/ns/1.0">\n'
        "  <teiHeader>\n    <fileDesc><titleStmt><title>"
        f"{escape(title)}</title></titleStmt></fileDesc>\n"
        f"    <profileDesc><abstract><p>{escape(abstract)}</p></abstract>"
        "</profileDesc>\n  </teiHeader>\n  <text>\n    <body>\n"
        + "\n".join(body) +
        "\n    </body>\n  </text>\n</TEI>\n")
    with open(os.path.join(FIXTURE, "xml", f"{paper_id}.xml"), "w") as f:
        f.write(xml)


def write_jsonl(name, records):
    with open(os.path.join(FIXTURE, name), "w") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


# ---- gold set -------------------------------------------------------------

GOLD_POSITIVE = [
    ("As shown in Figure {a}, the error decreases with depth.", "a"),
    ("Fig. {a} illustrates the overall architecture.", "a"),
    ("FIG. {a} shows the measured spectrum.", "a"),
    ("The ablation results are summarized in Fig. {a}.", "a"),
    ("We visualize the attention maps in Figure {a}(b).", "a"),
    ("Figure {a}c reports the per-class recall.", "a"),
    ("Comparing Figures {a} and {b}, the trend reverses.", "ab"),
    ("Figs. {a} and {b} plot the two regimes side by side.", "ab"),
    ("See fig. {a} for the qualitative examples.", "a"),
    ("The learning curves (Figure {a}) flatten after warm-up.", "a"),
    ("In figure {a} we show a failure case.", "a"),
    ("Results for the large model appear in Figures {a}-{c}.", "range"),
    ("Fig.~{a} depicts the sampling procedure.", "a"),
    ("The distribution in Figure {a}(a) is heavy-tailed.", "a"),
    ("Figures {a}, {b}, and {c} show the three datasets.", "abc"),
    ("As Fig. {a} suggests, larger batches help.", "a"),
    ("Figure {a} and Figure {b} use the same color scale.", "ab"),
    ("We refer the reader to Figure {a} for details.", "a"),
    ("The bottom row of Fig. {a} shows reconstructions.", "a"),
    ("Unlike the baseline (Fig. {a}), our model is stable.", "a"),
]

# Genuine detector misses: Roman numerals, chapter-style numbering and a
# spaced abbreviation the patterns do not cover.
GOLD_MISSES = [
    ("As shown in Figure {roman}, accuracy saturates.", "roman"),
    ("Figure {a}.{sub} details the second experiment.", "a"),
    ("The trend in Fig {roman} is consistent with theory.", "roman"),
    ("See F i g. {a} for the layout.", "a"),
]

# References to other papers' figures: the detector fires, the label is
# not a figure of this document.
GOLD_FALSE = [
    "We reproduce Figure {a} of [12] for comparison.",
]

GOLD_NEGATIVE = [
    "We figure out the cause by inspecting the gradients.",
    "The configuration file lists all hyperparameters.",
    "Table {a} lists the dataset statistics.",
    "Equation {a} defines the training objective.",
    "Section {a} describes the experimental setup.",
    "Configurations with {a} layers were unstable.",
    "The figures of merit are summarized below.",
    "This configures the optimizer for fine-tuning.",
    "Results improve by {a} points on average.",
    "The fig tree dataset contains {a} images.",
    "Prefigured by earlier work, the effect is small.",
    "Algorithm {a} sketches the training loop.",
]

ROMAN = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"]


def build_gold(rng):
    rows = []

    def add(text, labels):
        rows.append((text, ",".join(str(x) for x in labels)))

    n_pos, n_miss, n_false = 170, 14, 1
    for _ in range(n_pos):
        tpl, kind = rng.choice(GOLD_POSITIVE)
        a = rng.randint(1, 9)
        b = a + rng.randint(1, 3)
        c = b + rng.randint(1, 3)
        text = tpl.format(a=a, b=b, c=c)
        if kind == "a":
            labels = [a]
        elif kind == "ab":
            labels = [a, b]
        elif kind == "abc":
            labels = [a, b, c]
        else:
            labels = list(range(a, c + 1))
        add(text, labels)
    for _ in range(n_miss):
        tpl, kind = rng.choice(GOLD_MISSES)
        a = rng.randint(1, 9)
        text = tpl.format(a=a, sub=rng.randint(1, 4), roman=ROMAN[a - 1])
        add(text, [a])
    for _ in range(n_false):
        add(rng.choice(GOLD_FALSE).format(a=rng.randint(2, 9)), [])
    while len(rows) < 300:
        add(rng.choice(GOLD_NEGATIVE).format(a=rng.randint(1, 9)), [])
    rng.shuffle(rows)
    path = os.path.join(HERE, "mentions_gold.tsv")
    with open(path, "w") as f:
        f.write("# sentence<TAB>expected figure labels (comma-separated)\n")
        for text, labels in rows:
            f.write(f"{text}\t{labels}\n")


def main():
    os.makedirs(os.path.join(FIXTURE, "xml"), exist_ok=True)
    rng = random.Random(20221)
    papers, figures, ocr = build_papers(rng)
    write_jsonl("papers.jsonl", papers)
    write_jsonl("figures.jsonl", figures)
    write_jsonl("ocr.jsonl", ocr)
    build_gold(random.Random(6100))


if __name__ == "__main__":
    main()
