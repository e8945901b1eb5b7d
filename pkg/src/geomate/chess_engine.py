"""Chess rules kernel: FEN/SAN/PGN codecs, legal moves, and the mate-in-one oracle.

Board squares are indexed 0..63 from a8 (index 0) to h1 (index 63), matching
FEN placement order. Public state values are immutable; move application
returns new states. Draw rules (fifty-move, repetition) are not enforced
during replay: game records decide termination and the filter only checks
for mate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

WHITE = "w"
BLACK = "b"
START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"

MOVE_BIN_LABELS = ("1-10", "11-20", "21-30", "31-40", "41-50",
                   "51-60", "61-70", "71-80", "81-90", "91-100")


class ChessError(Exception):
    """Base class for chess failures."""


class FenError(ChessError):
    def __init__(self, fen_field: str, message: str):
        self.fen_field = fen_field
        super().__init__(f"bad FEN {fen_field} field: {message}")


class ParseError(ChessError):
    """Move text is not syntactically valid SAN."""


class IllegalMove(ChessError):
    """SAN matches no legal move in the position."""


class AmbiguousMove(ChessError):
    """SAN matches more than one legal move."""


class PgnError(ChessError):
    def __init__(self, game_index: int, offset: int, message: str):
        self.game_index = game_index
        self.offset = offset
        super().__init__(f"game {game_index} at offset {offset}: {message}")


class OutOfRange(ChessError):
    """Game is longer than the supported 100 fullmoves."""


def square_index(name: str) -> int:
    if len(name) != 2 or name[0] not in "abcdefgh" or name[1] not in "12345678":
        raise ValueError(f"bad square {name!r}")
    return (8 - int(name[1])) * 8 + (ord(name[0]) - 97)


def square_name(idx: int) -> str:
    return chr(97 + idx % 8) + str(8 - idx // 8)


def _build_tables():
    knight, king, rook_rays, bishop_rays = [], [], [], []
    pawn_src = {WHITE: [], BLACK: []}
    pawn_cap = {WHITE: [], BLACK: []}
    for i in range(64):
        f, t = i % 8, i // 8

        def at(df, dt):
            nf, nt = f + df, t + dt
            return nt * 8 + nf if 0 <= nf < 8 and 0 <= nt < 8 else None

        knight.append(tuple(s for s in (at(1, 2), at(2, 1), at(2, -1), at(1, -2),
                                        at(-1, -2), at(-2, -1), at(-2, 1), at(-1, 2)) if s is not None))
        king.append(tuple(s for s in (at(0, 1), at(1, 1), at(1, 0), at(1, -1),
                                      at(0, -1), at(-1, -1), at(-1, 0), at(-1, 1)) if s is not None))
        rays_r, rays_b = [], []
        for df, dt in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ray = []
            step = 1
            while at(df * step, dt * step) is not None:
                ray.append(at(df * step, dt * step))
                step += 1
            rays_r.append(tuple(ray))
        for df, dt in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            ray = []
            step = 1
            while at(df * step, dt * step) is not None:
                ray.append(at(df * step, dt * step))
                step += 1
            rays_b.append(tuple(ray))
        rook_rays.append(tuple(rays_r))
        bishop_rays.append(tuple(rays_b))
        # White pawns sit one row below (larger t) the square they attack.
        pawn_src[WHITE].append(tuple(s for s in (at(-1, 1), at(1, 1)) if s is not None))
        pawn_src[BLACK].append(tuple(s for s in (at(-1, -1), at(1, -1)) if s is not None))
        pawn_cap[WHITE].append(tuple(s for s in (at(-1, -1), at(1, -1)) if s is not None))
        pawn_cap[BLACK].append(tuple(s for s in (at(-1, 1), at(1, 1)) if s is not None))
    return knight, king, rook_rays, bishop_rays, pawn_src, pawn_cap


_KNIGHT, _KING, _ROOK_RAYS, _BISHOP_RAYS, _PAWN_SRC, _PAWN_CAP = _build_tables()

_CASTLE_KING_PATH = {(WHITE, "K"): (60, 61, 62), (WHITE, "Q"): (60, 59, 58),
                     (BLACK, "K"): (4, 5, 6), (BLACK, "Q"): (4, 3, 2)}
_CASTLE_EMPTY = {(WHITE, "K"): (61, 62), (WHITE, "Q"): (59, 58, 57),
                 (BLACK, "K"): (5, 6), (BLACK, "Q"): (3, 2, 1)}
_CASTLE_ROOK = {(WHITE, "K"): (63, 61), (WHITE, "Q"): (56, 59),
                (BLACK, "K"): (7, 5), (BLACK, "Q"): (0, 3)}
_ROOK_RIGHTS = {56: "Q", 63: "K", 0: "q", 7: "k"}


@dataclass(frozen=True)
class Move:
    from_square: str
    to_square: str
    promotion: str | None = None
    capture: bool = False
    castle: str | None = None  # "short" | "long"
    en_passant: bool = False


@dataclass(frozen=True)
class BoardState:
    """Full position: placement in FEN piece letters, a8 first, rank by rank."""

    placement: tuple[str | None, ...]
    side_to_move: str
    castling_rights: str
    en_passant: str | None
    halfmove_clock: int
    fullmove_number: int

    def piece_at(self, square: str) -> str | None:
        return self.placement[square_index(square)]


class _Position:
    """Mutable working position used by the generators; not part of the API."""

    __slots__ = ("board", "side", "castling", "ep", "halfmove", "fullmove", "wk", "bk")

    def __init__(self, board, side, castling, ep, halfmove, fullmove):
        self.board = board
        self.side = side
        self.castling = castling
        self.ep = ep
        self.halfmove = halfmove
        self.fullmove = fullmove
        self.wk = board.index("K")
        self.bk = board.index("k")

    def clone(self) -> "_Position":
        return _Position(self.board[:], self.side, self.castling, self.ep, self.halfmove, self.fullmove)

    def attacked(self, sq: int, by: str) -> bool:
        b = self.board
        if by == WHITE:
            kn, ki, ro, bi, qu, pa = "N", "K", "R", "B", "Q", "P"
        else:
            kn, ki, ro, bi, qu, pa = "n", "k", "r", "b", "q", "p"
        for s in _KNIGHT[sq]:
            if b[s] == kn:
                return True
        for s in _KING[sq]:
            if b[s] == ki:
                return True
        for s in _PAWN_SRC[by][sq]:
            if b[s] == pa:
                return True
        for ray in _ROOK_RAYS[sq]:
            for s in ray:
                pc = b[s]
                if pc is None:
                    continue
                if pc == ro or pc == qu:
                    return True
                break
        for ray in _BISHOP_RAYS[sq]:
            for s in ray:
                pc = b[s]
                if pc is None:
                    continue
                if pc == bi or pc == qu:
                    return True
                break
        return False

    def in_check(self, side: str) -> bool:
        return self.attacked(self.wk if side == WHITE else self.bk, _other(side))

    def pseudo_moves(self):
        """Yield (from, to, promo, flag); flag in {'-','c','e','d','K','Q'}."""
        b = self.board
        white = self.side == WHITE
        own_test = str.isupper if white else str.islower
        moves = []
        for frm in range(64):
            pc = b[frm]
            if pc is None or not own_test(pc):
                continue
            kind = pc.upper()
            if kind == "P":
                fwd = -8 if white else 8
                start_row = 6 if white else 1
                promo_row = 0 if white else 7
                one = frm + fwd
                if b[one] is None:
                    if one // 8 == promo_row:
                        for pr in "QRBN":
                            moves.append((frm, one, pr, "-"))
                    else:
                        moves.append((frm, one, None, "-"))
                        if frm // 8 == start_row and b[frm + 2 * fwd] is None:
                            moves.append((frm, frm + 2 * fwd, None, "d"))
                for to in _PAWN_CAP[WHITE if white else BLACK][frm]:
                    tgt = b[to]
                    if tgt is not None and own_test(tgt) is False:
                        if to // 8 == promo_row:
                            for pr in "QRBN":
                                moves.append((frm, to, pr, "c"))
                        else:
                            moves.append((frm, to, None, "c"))
                    elif tgt is None and to == self.ep:
                        moves.append((frm, to, None, "e"))
            elif kind == "N":
                for to in _KNIGHT[frm]:
                    tgt = b[to]
                    if tgt is None:
                        moves.append((frm, to, None, "-"))
                    elif not own_test(tgt):
                        moves.append((frm, to, None, "c"))
            elif kind == "K":
                for to in _KING[frm]:
                    tgt = b[to]
                    if tgt is None:
                        moves.append((frm, to, None, "-"))
                    elif not own_test(tgt):
                        moves.append((frm, to, None, "c"))
            else:
                rays = ()
                if kind in ("R", "Q"):
                    rays += _ROOK_RAYS[frm]
                if kind in ("B", "Q"):
                    rays += _BISHOP_RAYS[frm]
                for ray in rays:
                    for to in ray:
                        tgt = b[to]
                        if tgt is None:
                            moves.append((frm, to, None, "-"))
                            continue
                        if not own_test(tgt):
                            moves.append((frm, to, None, "c"))
                        break
        side = self.side
        for flag in ("K", "Q"):
            right = flag if side == WHITE else flag.lower()
            if right not in self.castling:
                continue
            if any(b[s] is not None for s in _CASTLE_EMPTY[(side, flag)]):
                continue
            path = _CASTLE_KING_PATH[(side, flag)]
            if any(self.attacked(s, _other(side)) for s in path):
                continue
            moves.append((path[0], path[2], None, flag))
        return moves

    def do(self, m):
        frm, to, promo, flag = m
        b = self.board
        pc = b[frm]
        captured = b[to]
        undo = (frm, to, promo, flag, pc, captured, self.castling, self.ep,
                self.halfmove, self.fullmove)
        white = self.side == WHITE
        b[frm] = None
        b[to] = (promo if white else promo.lower()) if promo else pc
        if flag == "e":
            cap_sq = to + 8 if white else to - 8
            b[cap_sq] = None
        elif flag in ("K", "Q"):
            r_from, r_to = _CASTLE_ROOK[(self.side, flag)]
            b[r_to] = b[r_from]
            b[r_from] = None
        if pc == "K":
            self.wk = to
            self.castling = self.castling.replace("K", "").replace("Q", "")
        elif pc == "k":
            self.bk = to
            self.castling = self.castling.replace("k", "").replace("q", "")
        for sq in (frm, to):
            right = _ROOK_RIGHTS.get(sq)
            if right and right in self.castling:
                corner_piece = "R" if right.isupper() else "r"
                # The right lapses when the rook leaves or the corner is taken.
                if (sq == frm and pc == corner_piece) or sq == to:
                    self.castling = self.castling.replace(right, "")
        self.ep = (frm + to) // 2 if flag == "d" else None
        self.halfmove = 0 if (pc in ("P", "p") or captured is not None or flag == "e") else self.halfmove + 1
        if not white:
            self.fullmove += 1
        self.side = _other(self.side)
        return undo

    def undo(self, u):
        frm, to, promo, flag, pc, captured, castling, ep, halfmove, fullmove = u
        b = self.board
        b[frm] = pc
        b[to] = captured
        self.side = _other(self.side)
        white = self.side == WHITE
        if flag == "e":
            cap_sq = to + 8 if white else to - 8
            b[cap_sq] = "p" if white else "P"
        elif flag in ("K", "Q"):
            r_from, r_to = _CASTLE_ROOK[(self.side, flag)]
            b[r_from] = b[r_to]
            b[r_to] = None
        if pc == "K":
            self.wk = frm
        elif pc == "k":
            self.bk = frm
        self.castling = castling
        self.ep = ep
        self.halfmove = halfmove
        self.fullmove = fullmove

    def legal_moves(self):
        out = []
        side = self.side
        for m in self.pseudo_moves():
            u = self.do(m)
            if not self.in_check(side):
                out.append(m)
            self.undo(u)
        return out

    def perft(self, depth: int) -> int:
        if depth <= 0:
            return 1
        moves = self.legal_moves()
        if depth == 1:
            return len(moves)
        total = 0
        for m in moves:
            u = self.do(m)
            total += self.perft(depth - 1)
            self.undo(u)
        return total


def _other(side: str) -> str:
    return BLACK if side == WHITE else WHITE


def _to_position(state: BoardState) -> _Position:
    ep = square_index(state.en_passant) if state.en_passant else None
    return _Position(list(state.placement), state.side_to_move, state.castling_rights,
                     ep, state.halfmove_clock, state.fullmove_number)


def _to_state(pos: _Position) -> BoardState:
    ep = square_name(pos.ep) if pos.ep is not None else None
    return BoardState(tuple(pos.board), pos.side, pos.castling, ep, pos.halfmove, pos.fullmove)


def parse_fen(text: str) -> BoardState:
    fields = text.split()
    if len(fields) != 6:
        raise FenError("field count", f"expected 6 fields, got {len(fields)}")
    placement_text, side, castling, ep, halfmove, fullmove = fields
    rows = placement_text.split("/")
    if len(rows) != 8:
        raise FenError("placement", f"expected 8 ranks, got {len(rows)}")
    board: list[str | None] = []
    for row in rows:
        cells: list[str | None] = []
        for ch in row:
            if ch.isdigit():
                cells.extend([None] * int(ch))
            elif ch in "KQRBNPkqrbnp":
                cells.append(ch)
            else:
                raise FenError("placement", f"bad piece letter {ch!r}")
        if len(cells) != 8:
            raise FenError("placement", f"rank {row!r} does not span 8 files")
        board.extend(cells)
    if side not in (WHITE, BLACK):
        raise FenError("side to move", f"expected 'w' or 'b', got {side!r}")
    if castling != "-":
        if not castling or any(c not in "KQkq" for c in castling) or len(set(castling)) != len(castling):
            raise FenError("castling", f"bad rights {castling!r}")
    if ep != "-":
        try:
            ep_idx = square_index(ep)
        except ValueError as exc:
            raise FenError("en passant", str(exc)) from exc
        if ep_idx // 8 not in (2, 5):
            raise FenError("en passant", f"{ep} is not on rank 3 or 6")
    if not halfmove.isdigit():
        raise FenError("halfmove clock", f"expected a nonnegative integer, got {halfmove!r}")
    if not fullmove.isdigit() or int(fullmove) < 1:
        raise FenError("fullmove number", f"expected a positive integer, got {fullmove!r}")
    if board.count("K") != 1 or board.count("k") != 1:
        raise FenError("placement", "each side needs exactly one king")
    head = board[0:8]
    tail = board[56:64]
    if any(p in ("P", "p") for p in head + tail):
        raise FenError("placement", "pawns cannot stand on rank 1 or 8")
    state = BoardState(tuple(board), side, castling if castling != "-" else "",
                       ep if ep != "-" else None, int(halfmove), int(fullmove))
    pos = _to_position(state)
    if pos.in_check(_other(side)):
        raise FenError("side to move", "side not to move is in check")
    return state


def to_fen(state: BoardState) -> str:
    rows = []
    for r in range(8):
        row = ""
        empty = 0
        for f in range(8):
            pc = state.placement[r * 8 + f]
            if pc is None:
                empty += 1
            else:
                if empty:
                    row += str(empty)
                    empty = 0
                row += pc
        if empty:
            row += str(empty)
        rows.append(row)
    castling = "".join(c for c in "KQkq" if c in state.castling_rights) or "-"
    return " ".join(("/".join(rows), state.side_to_move, castling,
                     state.en_passant or "-", str(state.halfmove_clock), str(state.fullmove_number)))


def initial_state() -> BoardState:
    return parse_fen(START_FEN)


def _to_public_move(m) -> Move:
    frm, to, promo, flag = m
    return Move(square_name(frm), square_name(to), promo,
                capture=flag in ("c", "e"), en_passant=flag == "e",
                castle={"K": "short", "Q": "long"}.get(flag))


def legal_moves(state: BoardState) -> list[Move]:
    return [_to_public_move(m) for m in _to_position(state).legal_moves()]


def apply_move(state: BoardState, move: Move) -> BoardState:
    pos = _to_position(state)
    for m in pos.legal_moves():
        if _to_public_move(m) == move:
            pos.do(m)
            return _to_state(pos)
    raise IllegalMove(f"{move} is not legal here")


def is_check(state: BoardState) -> bool:
    return _to_position(state).in_check(state.side_to_move)


def is_checkmate(state: BoardState) -> bool:
    pos = _to_position(state)
    return pos.in_check(state.side_to_move) and not pos.legal_moves()


def is_stalemate(state: BoardState) -> bool:
    pos = _to_position(state)
    return not pos.in_check(state.side_to_move) and not pos.legal_moves()


def perft(state: BoardState, depth: int) -> int:
    """Exhaustive legal-move node count; validates the generator."""
    return _to_position(state).perft(depth)


_SAN_RE = re.compile(
    r"^(?:(?P<castle>O-O-O|O-O|0-0-0|0-0)"
    r"|(?P<piece>[KQRBN])?(?P<dfile>[a-h])?(?P<drank>[1-8])?(?P<capture>x)?"
    r"(?P<target>[a-h][1-8])(?:=(?P<promo>[QRBN]))?)$")


def _clean_san(san: str) -> str:
    return san.rstrip("+#!?").replace("e.p.", "").strip()


def _san_candidates(pos: _Position, san: str, moves) -> list:
    core = _clean_san(san)
    if not core:
        raise ParseError(f"empty SAN {san!r}")
    m = _SAN_RE.match(core)
    if not m:
        raise ParseError(f"unparseable SAN {san!r}")
    if m.group("castle"):
        flag = "Q" if len(m.group("castle")) == 5 else "K"
        return [mv for mv in moves if mv[3] == flag]
    target = square_index(m.group("target"))
    piece = m.group("piece")
    dfile = m.group("dfile")
    drank = m.group("drank")
    promo = m.group("promo")
    out = []
    for mv in moves:
        frm, to, mpromo, flag = mv
        if flag in ("K", "Q") or to != target:
            continue
        pc = pos.board[frm].upper()
        if piece:
            if pc != piece:
                continue
        else:
            if pc != "P":
                continue
            # A bare pawn target is a push; captures carry the source file.
            if dfile is None and frm % 8 != to % 8:
                continue
        if dfile and frm % 8 != ord(dfile) - 97:
            continue
        if drank and frm // 8 != 8 - int(drank):
            continue
        if (promo or None) != (mpromo or None):
            continue
        out.append(mv)
    return out


def _render_san(pos: _Position, mv, moves) -> str:
    """Canonical SAN with minimal disambiguation and check/mate suffix."""
    frm, to, promo, flag = mv
    if flag in ("K", "Q"):
        core = "O-O" if flag == "K" else "O-O-O"
    else:
        pc = pos.board[frm].upper()
        capture = flag in ("c", "e")
        if pc == "P":
            core = (square_name(frm)[0] + "x" if capture else "") + square_name(to)
            if promo:
                core += "=" + promo
        else:
            rivals = [m for m in moves
                      if m[1] == to and m[0] != frm and pos.board[m[0]].upper() == pc and m[3] not in ("K", "Q")]
            disamb = ""
            if rivals:
                same_file = any(m[0] % 8 == frm % 8 for m in rivals)
                same_rank = any(m[0] // 8 == frm // 8 for m in rivals)
                if not same_file:
                    disamb = square_name(frm)[0]
                elif not same_rank:
                    disamb = square_name(frm)[1]
                else:
                    disamb = square_name(frm)
            core = pc + disamb + ("x" if capture else "") + square_name(to)
    u = pos.do(mv)
    try:
        if pos.in_check(pos.side):
            core += "#" if not pos.legal_moves() else "+"
    finally:
        pos.undo(u)
    return core


def apply_san(state: BoardState, san: str) -> BoardState:
    """Apply the unique legal move written in SAN; suffixes are tolerated."""
    pos = _to_position(state)
    moves = pos.legal_moves()
    cands = _san_candidates(pos, san, moves)
    if not cands:
        raise IllegalMove(f"{san!r} matches no legal move")
    if len(cands) > 1:
        raise AmbiguousMove(f"{san!r} matches {len(cands)} legal moves")
    pos.do(cands[0])
    return _to_state(pos)


def san_for_move(state: BoardState, move: Move) -> str:
    pos = _to_position(state)
    moves = pos.legal_moves()
    for m in moves:
        if _to_public_move(m) == move:
            return _render_san(pos, m, moves)
    raise IllegalMove(f"{move} is not legal here")


def normalize_san(state: BoardState, san: str) -> str:
    """Canonical SAN (with suffix) for whatever legal move `san` denotes."""
    pos = _to_position(state)
    moves = pos.legal_moves()
    cands = _san_candidates(pos, san, moves)
    if not cands:
        raise IllegalMove(f"{san!r} matches no legal move")
    if len(cands) > 1:
        raise AmbiguousMove(f"{san!r} matches {len(cands)} legal moves")
    return _render_san(pos, cands[0], moves)


def find_mate_in_one(state: BoardState) -> list[str]:
    """All legal moves that deliver immediate mate, in canonical SAN with '#'."""
    pos = _to_position(state)
    moves = pos.legal_moves()
    out = []
    for m in moves:
        u = pos.do(m)
        mate = pos.in_check(pos.side) and not pos.legal_moves()
        pos.undo(u)
        if mate:
            out.append(_render_san(pos, m, moves))
    return out


@dataclass(frozen=True)
class Game:
    """One parsed game: SAN movetext with tags; replay-verified on the standard path."""

    san_moves: tuple[str, ...]
    termination: str  # "checkmate" | "other"
    source_tags: dict[str, str] = field(default_factory=dict, compare=False)

    def has_standard_start(self) -> bool:
        tags = self.source_tags
        if tags.get("SetUp") == "1" or "FEN" in tags:
            return False
        variant = tags.get("Variant", "Standard").lower()
        return variant in ("standard", "from position") or variant == ""


_REPLAY_CACHE: dict[tuple[str, ...], tuple[BoardState | None, BoardState]] = {}


def replay_game(game: Game) -> tuple[BoardState | None, BoardState]:
    """(penultimate state, final state) after replaying from the standard start.

    Raises IllegalMove/AmbiguousMove/ParseError when the movetext cannot be
    replayed. Results are cached by movetext.
    """
    key = game.san_moves
    hit = _REPLAY_CACHE.get(key)
    if hit is not None:
        return hit
    state = initial_state()
    prev: BoardState | None = None
    for san in game.san_moves:
        prev = state
        state = apply_san(state, san)
    if len(_REPLAY_CACHE) > 4096:
        _REPLAY_CACHE.clear()
    _REPLAY_CACHE[key] = (prev, state)
    return prev, state


_TAG_RE = re.compile(r'\[\s*(\w+)\s*"((?:[^"\\]|\\.)*)"\s*\]')
_RESULTS = {"1-0", "0-1", "1/2-1/2", "*"}
_MOVENUM_RE = re.compile(r"^\d+\.*$")


def parse_pgn(text: str) -> list[Game]:
    """Parse a PGN file; malformed games are skipped, not fatal."""
    return parse_pgn_detailed(text)[0]


def parse_pgn_detailed(text: str) -> tuple[list[Game], list[PgnError]]:
    games: list[Game] = []
    errors: list[PgnError] = []
    raw_games = _split_pgn_games(text, errors)
    for index, (tags, tokens, offset) in enumerate(raw_games):
        sans = []
        bad = None
        for tok in tokens:
            if tok in _RESULTS or _MOVENUM_RE.match(tok):
                continue
            san = tok.rstrip("!?")
            if not san:
                continue
            try:
                _SAN_RE.match(_clean_san(san)) or (_ for _ in ()).throw(ParseError(san))
            except ParseError:
                bad = PgnError(index, offset, f"bad movetext token {tok!r}")
                break
            sans.append(san)
        if bad:
            errors.append(bad)
            continue
        game = Game(tuple(sans), "other", tags)
        if game.has_standard_start():
            try:
                _, final = replay_game(game)
            except ChessError as exc:
                errors.append(PgnError(index, offset, f"replay failed: {exc}"))
                continue
            termination = "checkmate" if is_checkmate(final) else "other"
        else:
            termination = "checkmate" if sans and sans[-1].endswith("#") else "other"
        games.append(Game(tuple(sans), termination, tags))
    return games, errors


def _split_pgn_games(text: str, errors: list[PgnError]):
    """Split raw PGN into (tags, movetext tokens, offset) triples."""
    out = []
    tags: dict[str, str] = {}
    tokens: list[str] = []
    start = 0
    in_moves = False
    i, n = 0, len(text)

    def flush(pos):
        nonlocal tags, tokens, in_moves, start
        if tags or tokens:
            out.append((tags, tokens, start))
        tags, tokens, in_moves, start = {}, [], False, pos

    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "[":
            m = _TAG_RE.match(text, i)
            if m:
                if in_moves:
                    flush(i)
                tags[m.group(1)] = m.group(2).replace('\\"', '"').replace("\\\\", "\\")
                i = m.end()
                continue
            errors.append(PgnError(len(out), i, "unparseable tag pair"))
            i = text.find("\n", i)
            i = n if i < 0 else i + 1
            continue
        if ch == "{":
            end = text.find("}", i)
            if end < 0:
                errors.append(PgnError(len(out), i, "unterminated comment"))
                break
            i = end + 1
            in_moves = True
            continue
        if ch == "(":
            depth = 1
            i += 1
            while i < n and depth:
                if text[i] == "(":
                    depth += 1
                elif text[i] == ")":
                    depth -= 1
                i += 1
            in_moves = True
            continue
        if ch == ";":
            i = text.find("\n", i)
            i = n if i < 0 else i + 1
            continue
        if ch == "$":
            i += 1
            while i < n and text[i].isdigit():
                i += 1
            in_moves = True
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "{(;[":
            j += 1
        tok = text[i:j]
        in_moves = True
        tokens.append(tok)
        i = j
        if tok in _RESULTS:
            flush(i)
    flush(n)
    return out


def filter_game(game: Game) -> tuple[bool, str | None]:
    """Accept a game iff it starts normally, replays legally, and ends in mate."""
    if not game.has_standard_start():
        return False, "non_standard_opening"
    try:
        _, final = replay_game(game)
    except ChessError:
        return False, "illegal_move"
    if not is_checkmate(final):
        return False, "no_checkmate"
    return True, None


def bin_by_moves(game: Game) -> int:
    """Ten-fullmove difficulty bin index of an accepted game (0 -> '1-10')."""
    _, final = replay_game(game)
    count = final.fullmove_number
    if count > 100:
        raise OutOfRange(f"{count} fullmoves exceeds the 100-move binning range")
    return (count - 1) // 10


def move_bin_label(index: int) -> str:
    return MOVE_BIN_LABELS[index]


def sans_to_movetext(sans) -> str:
    """Numbered movetext starting from white: '1. e4 e5 2. Nf3 ...'."""
    parts = []
    for i, san in enumerate(sans):
        if i % 2 == 0:
            parts.append(f"{i // 2 + 1}.")
        parts.append(san)
    return " ".join(parts)


def movetext_to_sans(text: str) -> tuple[str, ...]:
    """SAN tokens of numbered movetext; numbers, results, and NAGs are dropped."""
    out = []
    for tok in text.split():
        if tok in _RESULTS or _MOVENUM_RE.match(tok) or tok.startswith("$"):
            continue
        tok = tok.rstrip("!?")
        # Glued move numbers like '12.Nf3' appear in loose transcripts.
        m = re.match(r"^(\d+\.+)(.+)$", tok)
        if m:
            tok = m.group(2)
        if tok:
            out.append(tok)
    return tuple(out)
