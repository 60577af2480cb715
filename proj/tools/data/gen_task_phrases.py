"""Regenerates data/task_phrases.tsv from hand-picked templates.

Usage: python3 tools/data/gen_task_phrases.py > data/task_phrases.tsv
"""

TASK_VERBS = [
    "add", "insert", "remove", "delete", "create", "convert", "sort", "find", "iterate",
    "read", "write", "open", "close", "execute", "update", "get", "put", "push", "pop",
    "copy", "clear", "check", "compare", "replace", "load", "parse", "build", "connect",
    "retrieve", "store", "initialize", "declare", "implement", "traverse", "count", "reverse",
    "split", "join", "filter", "merge", "print", "format", "register", "obtain", "access",
]

OBJECTS = [
    "an element", "elements", "a List", "the Set", "a Map", "the file", "a Connection",
    "a Statement", "the ResultSet", "a Deque", "the queue", "a string", "the array",
    "a single character", "the database", "an item", "the keys", "the values", "a stream",
    "the collection",
]

TARGETS = [
    ("to", "a List"), ("from", "the Collection"), ("into", "a Set"), ("in", "a Map"),
    ("of", "the Deque"), ("with", "a Statement"), ("from", "the database"), ("to", "the file"),
    ("at", "a specific index"), ("into", "an array"),
]

NON_TASK = [
    "pass the set as parameter to addAll()",
    "pass the list as argument to the constructor",
    "pass a comparator to the method",
    "pass the index as the first parameter",
    "pass null to the method",
    "see the section below",
    "see the JavaDoc for details",
    "see the previous example",
    "see the next chapter",
    "note the difference",
    "note that the list is empty",
    "let us look at an example",
    "let me explain",
    "let the method return",
    "look at the following code",
    "look at the example below",
    "take a look at the code",
    "consider the following example",
    "consider this case",
    "mean the same thing",
    "means that the element is missing",
    "depend on the implementation",
    "depends on the order of the elements",
    "happen at runtime",
    "happens in the background",
    "seem to work",
    "seems strange at first",
    "know the size in advance",
    "know about the difference",
    "say the list has ten elements",
    "refer to the documentation",
    "refer to the previous section",
    "keep in mind the order",
    "remember the rules",
    "is the default behaviour",
    "is an interface",
    "are the same",
    "was added in Java 5",
    "has a method",
    "have a look",
    "explain the idea",
    "explains the concept",
    "shows the output",
    "show the result below",
    "imagine a queue of people",
    "assume the list is sorted",
    "suppose the map is empty",
    "think of a stack",
    "wonder about the result",
    "learn the basics",
    "learn more in the next tutorial",
    "continue with the next part",
    "continue reading",
    "go through the steps",
    "go back to the first example",
    "understand the concept",
    "understand how it works",
    "makes sense",
    "make sure the connection is open",
    "need a new approach",
    "needs more memory",
    "want a faster version",
    "wants the result",
    "like this approach",
    "prefer the other one",
    "works the same way",
    "work in most cases",
    "behave differently",
    "behaves like a list",
    "differ in behaviour",
    "differs from the other",
    "contain duplicates",
    "contains no elements",
    "belong to the package",
    "belongs to the same class",
    "apply to all collections",
    "applies to the subclasses",
    "cover the basics",
    "covers this topic",
    "mention the option",
    "mentioned earlier",
    "discuss the topic",
    "discussed later",
    "describe the interface",
    "described in the text",
    "introduce the concept",
    "introduced in Java 8",
    "illustrate the principle",
    "illustrates the point",
    "summarize the chapter",
    "try it yourself",
    "try the example",
    "enjoy the tutorial",
    "thank the reader",
    "recall the definition",
    "notice the difference",
    "notice the output",
    "observe the behaviour",
    "observe the result",
    "expect an exception",
    "expects the same output",
    "return true",
    "returns the element",
    "returns false if empty",
    "throws an exception",
    "throw an error",
    "use it carefully",
    "call it later",
    "call it as shown",
    "do the same",
    "does nothing",
    "get the idea",
    "get started",
]


def main():
    print("# Labeled verb phrases for the default task-phrase classifier.")
    print("# Format: label<TAB>phrase, label is task or non-task.")
    seen = set()
    rows = []
    for i, verb in enumerate(TASK_VERBS):
        obj = OBJECTS[i % len(OBJECTS)]
        obj2 = OBJECTS[(i * 7 + 3) % len(OBJECTS)]
        adp, target = TARGETS[i % len(TARGETS)]
        for phrase in (f"{verb.capitalize()} {obj}", f"{verb} {obj2}", f"{verb.capitalize()} {obj} {adp} {target}"):
            if phrase.lower() not in seen:
                seen.add(phrase.lower())
                rows.append(("task", phrase))
    extras = [
        "Convert Set to List", "Convert List to Set", "Reads a single character",
        "Remove element from Collection", "Insert an element into a List at a specific index",
        "Add elements to a List", "Execute SQL queries", "Create a ResultSet by executing queries",
        "Open a Connection", "Update the database", "Iterate over a List", "Sort a List",
        "Push an element onto the Deque", "Find the index of an element",
    ]
    for phrase in extras:
        if phrase.lower() not in seen:
            seen.add(phrase.lower())
            rows.append(("task", phrase))
    for phrase in NON_TASK:
        rows.append(("non-task", phrase))
    for label, phrase in rows:
        print(f"{label}\t{phrase}")


if __name__ == "__main__":
    main()
