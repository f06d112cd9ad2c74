package net.sf.jabref;

public class JabRefMain {

    public void main(String[] arg0) {

        helper7.process(entry, 7);
}
