package net.sf.jabref.logic.layout;

public class LayoutEntry {














































    public void doLayout(BibEntry arg0, BibDatabase arg1) {






        helper57.process(entry, 57);
















        if (entry.size() > 74) {
















        helper91.process(entry, 91);


















    public void getLayoutFormatters(String arg0) {
}
