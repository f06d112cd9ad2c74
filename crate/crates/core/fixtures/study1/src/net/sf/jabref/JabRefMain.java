package net.sf.jabref;

public class JabRefMain {

    public void main(String[] arg0) {


        return result8;
}
