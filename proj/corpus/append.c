struct list {unsigned head; struct list *tail;};
struct list *append (struct list *x, struct list *y) {
  //@ With l1 l2,
  //@ Require ll(x, l1) * ll(y, l2)
  //@ Ensure ll(ret, app(l1, l2))
  struct list *t, *u;
  if (x == NULL) {
    return y;
  } else {
    /*@ Assert exists v w a l1s, x == v && y == w && l1 == cons(a, l1s) &&
          v != NULL && ll(v, l1) * ll(w, l2) */
    /*@ Assert exists n, x == v && y == w && v |-> (a, n) * ll(n, l1s) * ll(w, l2) */
    t = x;
    u = t->tail;
    /*@ Inv exists s b tv uv r, x == v && y == w && t == tv && u == uv &&
          l1 == app(s, cons(b, r)) &&
          lseg(v, tv, s) * tv |-> (b, uv) * ll(uv, r) * ll(w, l2) */
    while (u != NULL) {
      /*@ Assert exists c un r2, x == v && y == w && t == tv && u == uv &&
            r == cons(c, r2) &&
            lseg(v, tv, s) * tv |-> (b, uv) * uv |-> (c, un) * ll(un, r2) * ll(w, l2) */
      t = u;
      u = t->tail;
    }
    t->tail = y;
    return x;
  }
}
