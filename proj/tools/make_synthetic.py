#!/usr/bin/env python3
"""Generate the bundled synthetic corpus under data/synthetic/.

Writes posts.jsonl (200 valid posts plus a few junk lines), removal_list.txt
and embeddings.txt. config.json is maintained by hand. Output is
deterministic for a given --seed.
"""

import argparse
import json
from pathlib import Path

import numpy as np

TOPICS = {
    "sleep": {
        "words": "sleep tired night alarm morning nap bed caffeine exhausted awake shift insomnia "
        "schedule rest dream snooze energy drowsy weekend routine".split(),
        "items": "melatonin hammock earplugs podcast thermostat blackout treadmill espresso "
        "mattress pillowcase lullaby chamomile snorkel nightlight".split(),
    },
    "housing": {
        "words": "apartment roommate lease landlord rent move city house neighbor kitchen "
        "deposit building room furniture utilities street parking noise".split(),
        "items": "radiator balcony dishwasher sublet doorman basement skylight mailbox "
        "chandelier elevator doorbell garage laundromat attic".split(),
    },
    "work": {
        "words": "job manager boss coworker office salary interview promotion project meeting "
        "deadline career team client shift email raise contract".split(),
        "items": "spreadsheet headset whiteboard internship paycheck lanyard cubicle "
        "timesheet stapler printer badge conference keyboard forklift".split(),
    },
    "school": {
        "words": "class teacher exam grade homework semester college professor course study "
        "lecture assignment major campus tutor essay test".split(),
        "items": "chemistry calculus textbook scholarship dormitory transcript syllabus "
        "microscope laboratory thesis notebook backpack algebra seminar".split(),
    },
    "relationships": {
        "words": "girlfriend boyfriend friend date text relationship feelings crush breakup "
        "trust partner argue talk weekend family love message".split(),
        "items": "anniversary bouquet playlist necklace valentine restaurant picnic "
        "rollercoaster bracelet concert postcard sweater candle karaoke".split(),
    },
    "money": {
        "words": "money budget debt savings bank loan credit paycheck bills spend account "
        "expenses card payment interest afford cash".split(),
        "items": "mortgage scooter subscription overdraft pawnshop invoice coupon "
        "lottery wallet receipt pension bitcoin allowance warranty".split(),
    },
    "pets": {
        "words": "dog cat vet puppy kitten food walk bark litter leash pet shelter "
        "adopt toy groomer yard owner".split(),
        "items": "parakeet hamster aquarium collar kennel goldfish tortoise iguana "
        "ferret birdcage chinchilla harness catnip rabbit".split(),
    },
    "health": {
        "words": "gym workout weight diet doctor pain exercise muscle run health "
        "stretch injury knee protein training calories".split(),
        "items": "dumbbell kettlebell smoothie physiotherapy bicycle marathon yoga "
        "inhaler crutches vitamins sunscreen dentist skateboard swimsuit".split(),
    },
}

FILLER = [
    "I have been thinking about this for a while now and I still feel stuck",
    "it has been going on for about {n} weeks and it keeps getting worse",
    "my family says I am overthinking it but I am not so sure",
    "I tried to ignore it at first but that did not work at all",
    "to give some background I am {age} and I live in a small town",
    "honestly I am pretty frustrated and a little embarrassed about it",
    "last week things got a lot more complicated than I expected",
    "I talked to a friend about it but they did not really get it",
]

STATEMENT_TEMPLATES = [
    "the {a} has been a big part of my {b} lately",
    "every {a} I end up dealing with the {b} again",
    "I think the {a} is making the {b} harder than it should be",
    "my {a} and my {b} are both pretty stressful right now",
    "whenever the {a} comes up I start worrying about the {b}",
    "I spent most of the {a} trying to sort out the {b}",
]

ITEM_TEMPLATES = [
    "a few months ago I got a {item} because I thought it would help with my {a}",
    "the {item} was supposed to fix everything but the {a} is still a problem",
    "now the {item} sits there and reminds me of the {a} every day",
    "I keep going back and forth on whether the {item} was a mistake",
]

QUESTION_TEMPLATES = [
    "How do I stop the {item} from ruining my {a}?",
    "Should I get rid of the {item} and focus on my {a} instead?",
    "Is it normal for a {item} to affect your {a} this much?",
    "What is the best way to deal with a {item} and a {a} at once?",
    "Can a {item} really make the {a} worse over time?",
    "Any tips for handling a {item} when the {a} is already stressful?",
    "How can I make the {item} work with my {a}?",
]

GENERIC_QUESTIONS = ["Help?", "Any advice?", "What should I do?", "Thoughts?", "Am I wrong?"]
START_WORD_ONLY = ["Should I just give up.", "How do people manage this."]


def sentence(text):
    return text[0].upper() + text[1:] + "."


def make_post(rng, pid, topic, item, kind):
    words = TOPICS[topic]["words"]
    pick = lambda: words[rng.integers(len(words))]
    body = []
    n_sentences = {"short": 2, "normal": int(rng.integers(7, 13))}.get(kind, 9)
    item_lines = list(rng.permutation(len(ITEM_TEMPLATES))[:2])
    for i in range(n_sentences):
        r = rng.random()
        if i in (1, 4) and item_lines:
            t = ITEM_TEMPLATES[item_lines.pop()]
            body.append(sentence(t.format(item=item, a=pick())))
        elif r < 0.3:
            f = FILLER[rng.integers(len(FILLER))]
            body.append(sentence(f.format(n=int(rng.integers(2, 9)), age=int(rng.integers(16, 40)))))
        else:
            t = STATEMENT_TEMPLATES[rng.integers(len(STATEMENT_TEMPLATES))]
            body.append(sentence(t.format(a=pick(), b=pick())))
    if rng.random() < 0.15:
        body.insert(int(rng.integers(1, len(body))), START_WORD_ONLY[rng.integers(len(START_WORD_ONLY))])
    if rng.random() < 0.1:
        body.append("Anyway, thanks for reading &amp; sorry for the long post.")

    question = QUESTION_TEMPLATES[rng.integers(len(QUESTION_TEMPLATES))].format(item=item, a=pick())
    generic = GENERIC_QUESTIONS[rng.integers(len(GENERIC_QUESTIONS))]
    title_is_question = rng.random() < 0.4
    if kind == "no_question":
        title = f"Long story about my {pick()}"
    elif title_is_question:
        title = question
        body.append(generic)
    else:
        title = f"Problem with my {item}"
        body.append(question)
        if rng.random() < 0.5:
            body.append(generic)
    return {"id": pid, "title": title, "body": " ".join(body), "created": 1500000000 + int(rng.integers(0, 10**7))}


def make_embeddings(rng, vocab_by_group, dim, noise):
    centers = {g: rng.standard_normal(dim) for g in vocab_by_group}
    lines = []
    for group, vocab in vocab_by_group.items():
        for w in sorted(vocab):
            v = centers[group] + noise * rng.standard_normal(dim)
            lines.append(w + " " + " ".join(f"{x:.5f}" for x in v))
    return lines


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/synthetic")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--dim", type=int, default=50)
    ap.add_argument("--noise", type=float, default=0.8)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    topics = list(TOPICS)
    posts = []
    for i in range(200):
        topic = topics[i % len(topics)]
        item = TOPICS[topic]["items"][(i // len(topics)) % len(TOPICS[topic]["items"])]
        kind = "normal"
        if i % 37 == 5:
            kind = "short"
        elif i % 41 == 7:
            kind = "no_question"
        posts.append(make_post(rng, f"p{i:03d}", topic, item, kind))
    # Title-only and deleted-body posts count as posts without bodies.
    posts[17]["body"] = ""
    posts[58]["body"] = "[deleted]"

    lines = [json.dumps(p, ensure_ascii=False) for p in posts]
    lines.insert(30, "{not valid json")
    lines.insert(90, json.dumps({"title": "No id here", "body": "This line has no id field."}))
    lines.insert(150, json.dumps({"id": "p010", "title": "Duplicate", "body": "Same id as an earlier post."}))
    (out / "posts.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")

    (out / "removal_list.txt").write_text(
        "# ids whose authors asked for removal\np044\np121\nzz999\n", encoding="utf-8"
    )

    tokens = set()
    for p in posts:
        for w in (p["title"] + " " + p["body"]).split():
            tokens.add(w.strip(".,?!;:&").lower())
    topical = {t: set(TOPICS[t]["words"]) | set(TOPICS[t]["items"]) for t in topics}
    all_topical = set().union(*topical.values())
    groups = {"common": {w for w in tokens if w and w not in all_topical}}
    groups.update(topical)
    emb = make_embeddings(rng, groups, args.dim, args.noise)
    (out / "embeddings.txt").write_text(f"{len(emb)} {args.dim}\n" + "\n".join(emb) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
