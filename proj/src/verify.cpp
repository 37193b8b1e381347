namespace bm {}
