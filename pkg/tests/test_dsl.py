import pathlib
import random
import string

import numpy as np
import pytest

from effham import (
    ModelCompileError,
    ModelError,
    ModelSyntaxError,
    ModelValidationError,
    annihilate,
    compile_model,
    parse_model,
    serialize_model,
    sigma_plus,
    sigma_x,
    sigma_z,
    tensor_product,
)

DATA = pathlib.Path(__file__).parent / "data"
CORPUS = sorted(DATA.glob("*.ham"))

MINIMAL = """\
space qubit 2
param g = 0.1
op drive = g * sp(qubit)
tone drive omega = 10.0
"""


def test_corpus_has_ten_files():
    assert len(CORPUS) == 10


def test_parse_minimal():
    ast = parse_model(MINIMAL)
    assert len(ast.spaces) == 1
    assert ast.spaces[0].name == "qubit"
    assert ast.spaces[0].dim == 2
    assert len(ast.params) == 1
    assert len(ast.operator_defs) == 1
    assert len(ast.tones) == 1


def test_parse_comments_and_blank_lines():
    ast = parse_model("# header\n\nspace q 2\n  # indented comment\ntone sx(q) omega = 1.0\n")
    assert len(ast.spaces) == 1


def test_negative_frequency_rejected_with_location():
    text = "space q 2\ntone sx(q) omega = -2.0\n"
    with pytest.raises(ModelValidationError) as err:
        parse_model(text)
    assert "positive" in str(err.value)
    assert err.value.line == 2


def test_syntax_error_carries_location():
    with pytest.raises(ModelSyntaxError) as err:
        parse_model("space q 2\nop bad = g +\n")
    assert err.value.line == 2
    assert err.value.col is not None


def test_duplicate_names_rejected():
    with pytest.raises(ModelValidationError):
        parse_model("space q 2\nspace q 3\ntone sx(q) omega = 1.0\n")
    with pytest.raises(ModelValidationError):
        parse_model("space q 2\nparam g = 1.0\nop g = sx(q)\ntone g omega = 1.0\n")


def test_unknown_identifier_rejected():
    with pytest.raises(ModelValidationError) as err:
        parse_model("space q 2\ntone mystery omega = 1.0\n")
    assert "mystery" in str(err.value)


def test_reserved_words_rejected_as_names():
    with pytest.raises(ModelError):
        parse_model("space omega 2\ntone sx(omega) omega = 1.0\n")


def test_unknown_space_in_builtin():
    with pytest.raises(ModelValidationError):
        parse_model("space q 2\ntone sx(cavity) omega = 1.0\n")


def test_declaration_order_enforced():
    with pytest.raises(ModelValidationError):
        parse_model("space q 2\nop first = second\nop second = sx(q)\ntone first omega = 1.0\n")


# ----------------------------------------------------------------------
# round trips


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_round_trip(path):
    text = path.read_text()
    ast = parse_model(text)
    again = parse_model(serialize_model(ast))
    assert again == ast


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_compiles(path):
    H = compile_model(parse_model(path.read_text()))
    assert H.dim >= 1


def test_serialization_deterministic():
    ast = parse_model(MINIMAL)
    assert serialize_model(ast) == serialize_model(parse_model(MINIMAL))


def test_serialization_preserves_precedence():
    text = "space q 2\nop w = sx(q) * (sy(q) + sz(q))\ntone w omega = 2.0\n"
    ast = parse_model(text)
    assert parse_model(serialize_model(ast)) == ast


# ----------------------------------------------------------------------
# compilation semantics


def test_compile_minimal_matrix():
    H = compile_model(parse_model(MINIMAL))
    assert H.dim == 2
    assert np.allclose(H.tones[0].h, 0.1 * sigma_plus())
    assert H.tones[0].omega == 10.0


def test_compile_kron_padding():
    # hand-assembled Kronecker oracle for a qubit x cavity exchange tone
    text = (
        "space qubit 2\nspace cavity 3\nparam g = 0.1\n"
        "tone g * sp(qubit) * a(cavity) omega = 10.0\n"
    )
    H = compile_model(parse_model(text))
    assert H.dim == 6
    assert np.allclose(H.tones[0].h, 0.1 * tensor_product(sigma_plus(), annihilate(3)))


def test_compile_factor_order_commutes_across_factors():
    base = "space qubit 2\nspace cavity 3\n"
    a = compile_model(parse_model(base + "tone sp(qubit) * a(cavity) omega = 1.0\n"))
    b = compile_model(parse_model(base + "tone a(cavity) * sp(qubit) omega = 1.0\n"))
    assert np.array_equal(a.tones[0].h, b.tones[0].h)


def test_compile_same_factor_order_preserved():
    base = "space q 2\n"
    ab = compile_model(parse_model(base + "tone sp(q) * sz(q) omega = 1.0\n"))
    ba = compile_model(parse_model(base + "tone sz(q) * sp(q) omega = 1.0\n"))
    assert np.allclose(ab.tones[0].h, sigma_plus() @ sigma_z())
    assert np.allclose(ba.tones[0].h, sigma_z() @ sigma_plus())
    assert not np.allclose(ab.tones[0].h, ba.tones[0].h)


def test_compile_single_space_builtin():
    H = compile_model(parse_model("space s 2\ntone sx(s) omega = 3.0\n"))
    assert np.array_equal(H.tones[0].h, sigma_x())


def test_compile_matrix_literal():
    H = compile_model(parse_model("space s 2\ntone mat[[0, 2i], [1, 0]] omega = 1.0\n"))
    assert np.allclose(H.tones[0].h, [[0, 2j], [1, 0]])


def test_compile_rejects_non_square_matrix():
    with pytest.raises(ModelCompileError):
        compile_model(parse_model("space s 2\ntone mat[[1, 0, 0], [0, 1, 0]] omega = 1.0\n"))


def test_compile_rejects_wrong_tone_dimension():
    text = "space q 2\nspace c 3\ntone mat[[0, 1], [1, 0]] omega = 1.0\n"
    with pytest.raises(ModelCompileError) as err:
        compile_model(parse_model(text))
    assert "dimension" in str(err.value)


def test_compile_rejects_scalar_plus_operator():
    with pytest.raises(ModelCompileError):
        compile_model(parse_model("space q 2\ntone sx(q) + 1 omega = 1.0\n"))


def test_compile_rejects_dimension_cap():
    text = "space big 70\nspace ger 70\ntone a(big) omega = 1.0\n"
    with pytest.raises(ModelCompileError):
        compile_model(parse_model(text))


def test_compile_projector_indices():
    H = compile_model(parse_model("space d 3\ntone proj(d, 2, 0) omega = 1.0\n"))
    expected = np.zeros((3, 3))
    expected[2, 0] = 1.0
    assert np.array_equal(H.tones[0].h, expected)
    with pytest.raises(ModelCompileError):
        compile_model(parse_model("space d 3\ntone proj(d, 0, 7) omega = 1.0\n"))


def test_compile_deterministic():
    text = CORPUS[0].read_text()
    a = compile_model(parse_model(text))
    b = compile_model(parse_model(text))
    assert a.dim == b.dim
    for ta, tb in zip(a.tones, b.tones):
        assert np.array_equal(ta.h, tb.h)
        assert ta.omega == tb.omega


# ----------------------------------------------------------------------
# totality under fuzzing


def _mutate(text: str, rnd: random.Random) -> str:
    chars = list(text)
    for _ in range(rnd.randint(1, 6)):
        action = rnd.random()
        pos = rnd.randrange(max(1, len(chars)))
        if action < 0.4 and chars:
            del chars[pos % len(chars)]
        elif action < 0.8:
            chars.insert(pos, rnd.choice(string.printable))
        else:
            chars.insert(pos, rnd.choice(["omega", "mat", "[[", "))", "1e", "-", "space "]))
    return "".join(chars)


def test_parser_is_total_under_fuzzing():
    rnd = random.Random(20260810)
    seeds = [path.read_text() for path in CORPUS]
    cases = []
    for k in range(120):
        cases.append(_mutate(seeds[k % len(seeds)], rnd))
    for _ in range(60):
        n = rnd.randint(0, 160)
        cases.append("".join(rnd.choice(string.printable) for _ in range(n)))
    for _ in range(20):
        n = rnd.randint(0, 40)
        cases.append("".join(chr(rnd.randint(1, 0x2FF)) for _ in range(n)))
    assert len(cases) == 200
    for case in cases:
        try:
            parse_model(case)
        except ModelError:
            pass  # a located diagnostic is the expected failure mode
